#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "hkw/scene.hpp"
#include "test_support.hpp"

using namespace hkw;

namespace {

std::string fixture(const std::string& name) {
  std::ifstream in(std::string(HKW_FIXTURE_DIR) + "/" + name);
  REQUIRE(in);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

std::string error_of(std::string_view text) {
  try {
    (void)parse_scene(text);
  } catch (const SceneError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("minimal H^1 scene") {
  const Scene scene = parse_scene(std::string_view(fixture("minimal_h1.json")));
  REQUIRE(scene.subvarieties.size() == 1);
  const Report report = run_scene(scene);
  REQUIRE(report.subvarieties.size() == 1);
  const auto& r = *report.subvarieties[0].report;
  CHECK(r.d == 2);
  CHECK(r.deg_omega == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r.deg_Omega == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r.wirtinger == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.trianalytic);
  CHECK(exit_code(report) == 0);
}

TEST_CASE("complex plane in H^2 has W = 0") {
  const Report report = run_scene(parse_scene(std::string_view(fixture("c2_plane.json"))));
  const auto& r = *report.subvarieties[0].report;
  CHECK(r.deg_omega == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::abs(r.deg_Omega) <= 1e-15);
  CHECK(r.wirtinger == 0.0);
  CHECK_FALSE(r.trianalytic);
  CHECK(exit_code(report) == 0);
}

TEST_CASE("V_theta fixture with every strategy") {
  RunOptions opts;
  opts.oracle = true;
  const Report report = run_scene(parse_scene(std::string_view(fixture("v_theta.json"))), opts);
  REQUIRE(report.subvarieties.size() == 3);
  double previous = 1.0;
  for (const auto& row : report.subvarieties) {
    CHECK(row.strategies.size() == 3);
    CHECK(row.strategies_agree);
    const double w = row.report->wirtinger;
    CHECK(w > 0.0);
    CHECK(w < 1.0);
    CHECK(w <= previous);
    previous = w;
  }
  CHECK(exit_code(report) == 0);
}

TEST_CASE("schema errors carry paths") {
  CHECK(error_of(fixture("unresolved.json")).find("unresolved name Y") != std::string::npos);
  CHECK(error_of(fixture("unresolved.json")).find("chains[0][1]") != std::string::npos);
  CHECK(error_of(fixture("not_complex.json")).find("subvarieties[0]") != std::string::npos);
  CHECK(error_of(fixture("not_complex.json")).find("P") != std::string::npos);
  CHECK(error_of(fixture("bad_structure.json")).find("IJ = K") != std::string::npos);
  CHECK(error_of(fixture("bad_structure.json")).find("space.structure") != std::string::npos);

  CHECK(error_of("[1, 2]").find("object") != std::string::npos);
  CHECK(error_of("{").find("invalid JSON") != std::string::npos);
  CHECK(error_of(R"({"space": {"n": 1, "structure": "standard"}, "subvarieties": [], "extra": 1})")
            .find("unknown key \"extra\"") != std::string::npos);
  CHECK(error_of(R"({"space": {"n": 0, "structure": "standard"}, "subvarieties": []})").find("space.n") !=
        std::string::npos);
  CHECK(error_of(R"({"space": {"n": 1, "structure": "standard"},
                     "subvarieties": [{"name": "A", "basis": [[1, 0, 0, 0], [0, 1, 0]]}]})")
            .find("subvarieties[0].basis[1]") != std::string::npos);
  CHECK(error_of(R"({"space": {"n": 1, "structure": "standard"},
                     "subvarieties": [{"name": "A", "basis": [[1, 0, 0, 0, 0], [0, 1, 0, 0, 0]]}]})")
            .find("ambient dimension is 4") != std::string::npos);
  CHECK(error_of(R"({"space": {"n": 1, "structure": "standard"},
                     "subvarieties": [{"name": "A", "basis": [[1, 0, 0, 0], [0, 1, 0, 0]]},
                                      {"name": "A", "basis": [[1, 0, 0, 0], [0, 1, 0, 0]]}]})")
            .find("duplicate name A") != std::string::npos);
  CHECK(error_of(R"({"space": {"n": 1, "structure": "standard"},
                     "subvarieties": [{"name": "A", "basis": [[1, 0, 0, 0], [0, 1, 0, 0]]}],
                     "options": {"strategy": "magic"}})")
            .find("options.strategy") != std::string::npos);
}

TEST_CASE("explicit structures") {
  const Scene scene = parse_scene(std::string_view(fixture("explicit_standard.json")));
  CHECK_FALSE(scene.space_spec.standard);
  const Report report = run_scene(scene);
  CHECK(report.subvarieties[0].report->wirtinger == doctest::Approx(1.0));
}

TEST_CASE("odd complex dimension is flagged at parse and reported as an input error") {
  const Scene scene = parse_scene(std::string_view(fixture("odd_dim.json")));
  REQUIRE(scene.warnings.size() == 1);
  CHECK(scene.warnings[0].find("odd complex dimension 1") != std::string::npos);
  const Report report = run_scene(scene);
  CHECK(report.subvarieties[0].error.find("odd complex dimension") != std::string::npos);
  CHECK(report.subvarieties[1].report->trianalytic);
  CHECK(exit_code(report) == 2);
}

TEST_CASE("mixed scene: chains, lattices, skipped links") {
  const Scene scene = parse_scene(std::string_view(fixture("mixed.json")));
  CHECK(scene.options.seed == 7u);
  const Report report = run_scene(scene);
  CHECK(report.seed == 7u);
  REQUIRE(report.chains.size() == 4);
  for (const auto& row : report.chains) {
    REQUIRE(row.report);
    CHECK(row.report->pass);
  }
  // H1+V is not hyperkahler after rescaling: its link is skipped with a reason.
  const auto& middle = report.chains[1].report->links[0];
  CHECK(middle.status == LinkStatus::skipped_no_certificate);
  CHECK_FALSE(middle.reason.empty());
  CHECK(report.subvarieties[4].report->volume == doctest::Approx(256.0));
  CHECK(exit_code(report) == 0);

  const auto json = to_json(report);
  CHECK(json["chains"][1]["links"][0]["status"] == "SKIPPED-NO-CERTIFICATE");
  CHECK(json["subvarieties"].size() == scene.subvarieties.size());
  const std::string table = format_table(report);
  CHECK(table.find("SKIPPED-NO-CERTIFICATE") != std::string::npos);
  CHECK(table.find("0 violations, 0 errors") != std::string::npos);
}

TEST_CASE("chain errors are captured per chain") {
  const Scene scene = parse_scene(std::string_view(R"({
    "space": {"n": 2, "structure": "standard"},
    "subvarieties": [
      {"name": "C2", "basis": [[1, 0, 0, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0, 0, 0],
                               [0, 0, 0, 0, 1, 0, 0, 0], [0, 0, 0, 0, 0, 1, 0, 0]]},
      {"name": "H", "basis": [[1, 0, 0, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0, 0, 0],
                              [0, 0, 1, 0, 0, 0, 0, 0], [0, 0, 0, 1, 0, 0, 0, 0]]}],
    "chains": [["H", "C2"], ["H"]]})"));
  const Report report = run_scene(scene);
  CHECK(report.chains[0].error.find("link 0 (H -> C2)") != std::string::npos);
  CHECK(report.chains[1].error.empty());
  CHECK(exit_code(report) == 2);
}

TEST_CASE("serialize round trip") {
  for (const char* name : {"minimal_h1.json", "mixed.json", "explicit_standard.json", "v_theta.json"}) {
    const Scene scene = parse_scene(std::string_view(fixture(name)));
    const std::string text = serialize(scene);
    const Scene back = parse_scene(std::string_view(text));
    CHECK(back == scene);
    CHECK(serialize(back) == text);
  }
  std::mt19937_64 rng(3);
  const auto space = std::make_shared<const QuaternionicSpace>(standard_space(2));
  const auto x = random_complex_subvariety(space, 2, rng, "X").with_lattice(hkw::testing::random_matrix(4, 4, rng));
  const Scene scene = make_scene({x}, {{"X"}}, SceneOptions{5, 1e-10, DegreeStrategy::oracle});
  const Scene back = parse_scene(std::string_view(serialize(scene)));
  CHECK(back == scene);
  CHECK(back.subvarieties[0].basis() == x.basis());
  CHECK(back.subvarieties[0].lattice() == x.lattice());
  CHECK(run_scene(back).strategy == DegreeStrategy::oracle);
}

TEST_CASE("reports are byte-identical across runs") {
  const Scene scene = parse_scene(std::string_view(fixture("mixed.json")));
  RunOptions opts;
  opts.oracle = true;
  const std::string a = to_json(run_scene(scene, opts)).dump(2);
  const std::string b = to_json(run_scene(scene, opts)).dump(2);
  CHECK(a == b);
  CHECK(format_table(run_scene(scene)) == format_table(run_scene(scene)));
}

TEST_CASE("tolerance override") {
  const Scene scene = parse_scene(std::string_view(fixture("minimal_h1.json")));
  CHECK(run_scene(scene).tolerance == 1e-9);
  RunOptions opts;
  opts.tolerance = 1e-6;
  CHECK(run_scene(scene, opts).tolerance == 1e-6);
}
