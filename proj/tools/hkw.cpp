// hkw: Wirtinger numbers and immersion chains for flat hyperkahler scenes.
//
//   hkw compute <scene> [--oracle] [--tolerance T] [--format table|json]
//   hkw check <scene>   (exit 1 on any inequality or certificate violation)
//   hkw properties --seed S --size N

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hkw/properties.hpp"
#include "hkw/scene.hpp"

namespace {

constexpr int kExitInputError = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw hkw::SceneError("", "cannot read " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

struct SceneArgs {
  std::string path;
  bool oracle = false;
  std::optional<double> tolerance;
  std::string format = "table";
  std::string fault = "none";
};

int run_scene_command(const SceneArgs& args, bool check) {
  hkw::Scene scene;
  try {
    scene = hkw::parse_scene(std::string_view(read_file(args.path)));
  } catch (const hkw::Error& e) {
    std::cerr << "hkw: " << args.path << ": " << e.what() << "\n";
    return kExitInputError;
  }
  hkw::RunOptions opts;
  opts.oracle = args.oracle;
  opts.tolerance = args.tolerance;
  opts.degree.pfaffian = hkw::kernel_for(*hkw::parse_fault(args.fault));
  const hkw::Report report = hkw::run_scene(scene, opts);
  if (args.format == "json") {
    std::cout << hkw::to_json(report).dump(2) << "\n";
  } else {
    std::cout << hkw::format_table(report);
  }
  const int code = hkw::exit_code(report);
  if (!check && code == 1) return 0;
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wirtinger numbers and immersion chains for flat hyperkahler scenes"};
  app.set_version_flag("--version", std::string(hkw::kToolVersion));
  app.require_subcommand(1);

  SceneArgs scene_args;
  auto add_scene_options = [&](CLI::App* sub) {
    sub->add_option("scene", scene_args.path, "scene file (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_flag("--oracle", scene_args.oracle, "also evaluate deg_Omega by every strategy and compare");
    sub->add_option("--tolerance", scene_args.tolerance, "relative comparison tolerance (default 1e-9)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--format", scene_args.format, "output format")->check(CLI::IsMember({"table", "json"}));
    sub->add_option("--inject-fault", scene_args.fault)->check(CLI::IsMember({"none", "pfaffian-pivot-sign"}))->group("");
  };
  auto* compute = app.add_subcommand("compute", "report degrees, Wirtinger numbers and chain verdicts");
  add_scene_options(compute);
  auto* check = app.add_subcommand("check", "like compute, but exit 1 on any violation");
  add_scene_options(check);

  hkw::PropertyOptions prop_opts;
  std::string prop_format = "table";
  std::string prop_fault = "none";
  auto* props = app.add_subcommand("properties", "run the seeded property suite");
  props->add_option("--seed", prop_opts.seed, "generator seed")->capture_default_str();
  props->add_option("--size", prop_opts.size, "cases per property")->capture_default_str()->check(CLI::PositiveNumber);
  props->add_option("--format", prop_format, "output format")->check(CLI::IsMember({"table", "json"}));
  props->add_option("--inject-fault", prop_fault)->check(CLI::IsMember({"none", "pfaffian-pivot-sign"}))->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInputError;
  }

  if (compute->parsed()) return run_scene_command(scene_args, false);
  if (check->parsed()) return run_scene_command(scene_args, true);

  prop_opts.fault = *hkw::parse_fault(prop_fault);
  const auto report = hkw::run_properties(prop_opts);
  if (prop_format == "json") {
    std::cout << hkw::to_json(report).dump(2) << "\n";
  } else {
    std::cout << hkw::format_table(report);
  }
  return report.all_passed() ? 0 : 1;
}
