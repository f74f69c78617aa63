#pragma once

// Scene documents: an ambient space, named subvarieties and chains of names.
//
//   {
//     "space": {"n": 2, "structure": "standard"},
//     "subvarieties": [{"name": "X", "basis": [[...], ...], "lattice": [[...]]}],
//     "chains": [["X", "M"]],
//     "options": {"seed": 0, "tolerance": 1e-9, "strategy": "complex-pfaffian"}
//   }
//
// "structure" may instead be {"I": [[...]], "J": [[...]], "K": [[...]], "g": [[...]]}.
// Basis rows are the ambient coordinates of spanning vectors; per quaternionic
// coordinate the real basis is ordered (1, i, j, k). Matrices are row-major.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hkw/immersion.hpp"

namespace hkw {

inline constexpr const char* kToolVersion = "1.0.0";

/// Malformed or inconsistent scene; `path()` locates the offending entry.
class SceneError : public Error {
 public:
  SceneError(std::string path, const std::string& message)
      : Error(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct SpaceSpec {
  int n = 1;
  bool standard = true;
  Matrix I, J, K, g;  // only for explicit structures
};

struct SubvarietySpec {
  std::string name;
  Matrix basis_rows;  // 2d x 4n
  std::optional<Matrix> lattice;
};

struct SceneOptions {
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;
  std::optional<DegreeStrategy> strategy;
};

struct Scene {
  SpaceSpec space_spec;
  std::vector<SubvarietySpec> subvariety_specs;
  std::vector<std::vector<std::string>> chains;
  SceneOptions options;

  // Validated objects built from the specs.
  SpacePtr space;
  std::vector<Subvariety> subvarieties;
  /// Non-fatal findings, e.g. odd complex dimensions (degrees undefined).
  std::vector<std::string> warnings;

  const Subvariety& find(const std::string& name) const;
};

/// Equality of the declarative content (specs, chains, options).
bool operator==(const Scene& a, const Scene& b);

Scene parse_scene(std::string_view text);
Scene parse_scene(const nlohmann::ordered_json& doc);

nlohmann::ordered_json to_json(const Scene& scene);
std::string serialize(const Scene& scene);

/// Scene holding the given subvarieties and chains in their common space.
Scene make_scene(const std::vector<Subvariety>& subvarieties, const std::vector<std::vector<std::string>>& chains = {},
                 SceneOptions options = {});

struct RunOptions {
  /// Also evaluate deg_Omega by every strategy and compare them.
  bool oracle = false;
  std::optional<double> tolerance;
  DegreeOptions degree{};
};

struct SubvarietyRow {
  std::string name;
  std::optional<DegreeReport> report;
  /// deg_Omega per strategy, filled when RunOptions::oracle is set.
  std::vector<std::pair<std::string, double>> strategies;
  double strategy_spread = 0.0;
  bool inequality_holds = true;
  bool equality_consistent = true;
  bool normalization_holds = true;
  bool strategies_agree = true;
  std::string error;

  bool violation() const;
};

struct ChainRow {
  std::vector<std::string> members;
  std::optional<ChainReport> report;
  std::string error;
};

struct Report {
  std::uint64_t seed = 0;
  double tolerance = kDefaultComparisonTolerance;
  bool oracle = false;
  DegreeStrategy strategy = DegreeStrategy::pfaffian_omega_j;
  std::vector<std::string> warnings;
  std::vector<SubvarietyRow> subvarieties;
  std::vector<ChainRow> chains;

  int violations() const;
  int errors() const;
};

/// Deterministic for a given scene and options; rows follow scene order.
Report run_scene(const Scene& scene, const RunOptions& opts = {});

nlohmann::ordered_json to_json(const Report& report);
std::string format_table(const Report& report);

/// Exit status: 0 all checks pass, 1 violation found, 2 input error.
int exit_code(const Report& report);

}  // namespace hkw
