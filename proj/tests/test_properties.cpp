#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hkw/properties.hpp"
#include "hkw/scene.hpp"

using namespace hkw;

TEST_CASE("seed 42, size 100: every property passes") {
  const auto report = run_properties({42, 100, Fault::none});
  for (const auto& r : report.results) {
    INFO(r.name << ": " << r.detail);
    CHECK(r.passed);
    CHECK(r.cases == 100);
  }
  CHECK(report.all_passed());
  CHECK(report.results.size() == property_names().size());
}

TEST_CASE("pivot-sign mutation is caught by the Wirtinger inequality") {
  const auto report = run_properties({42, 100, Fault::pfaffian_pivot_sign});
  const auto& wirtinger = report.find("wirtinger_inequality");
  CHECK_FALSE(wirtinger.passed);
  REQUIRE(wirtinger.counterexample);

  // The dump is a scene; re-running it under the same fault reproduces the failure.
  const Scene scene = parse_scene(*wirtinger.counterexample);
  RunOptions faulty;
  faulty.degree.pfaffian = kernel_for(Fault::pfaffian_pivot_sign);
  const Report again = run_scene(scene, faulty);
  CHECK_FALSE(again.subvarieties[0].inequality_holds);
  CHECK(exit_code(again) == 1);
  CHECK(exit_code(run_scene(scene)) == 0);

  const auto json = to_json(report);
  CHECK(json["all_passed"] == false);
  CHECK(json["metadata"]["fault"] == "pfaffian-pivot-sign");
}

TEST_CASE("size 1 smoke run and determinism") {
  const auto a = run_properties({9, 1, Fault::none});
  CHECK(a.all_passed());
  for (const auto& r : a.results) CHECK(r.cases == 1);
  const auto b = run_properties({9, 1, Fault::none});
  CHECK(to_json(a).dump() == to_json(b).dump());
  CHECK(format_table(a).find("properties passed") != std::string::npos);
  CHECK_THROWS_AS(run_properties({9, 0, Fault::none}), Error);
}

TEST_CASE("fault names") {
  CHECK(parse_fault("pfaffian-pivot-sign") == Fault::pfaffian_pivot_sign);
  CHECK(parse_fault("none") == Fault::none);
  CHECK_FALSE(parse_fault("other"));
}
