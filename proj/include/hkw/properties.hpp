#pragma once

// Seeded property suite over all modules. Each property draws its own
// generator from (seed, property index), so results do not depend on which
// other properties run.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hkw/subvariety.hpp"

namespace hkw {

/// Deliberate defects for mutation testing of the suite itself.
enum class Fault { none, pfaffian_pivot_sign };

std::optional<Fault> parse_fault(const std::string& text);
std::string to_string(Fault f);
/// Pfaffian kernel carrying the given fault.
PfaffianKernel kernel_for(Fault f);

struct PropertyOptions {
  std::uint64_t seed = 42;
  int size = 100;
  Fault fault = Fault::none;
};

struct PropertyResult {
  std::string name;
  bool passed = true;
  int cases = 0;
  std::string detail;
  /// Scene document (or matrix snippet for exterior-algebra properties)
  /// reproducing the first failing instance.
  std::optional<nlohmann::ordered_json> counterexample;
};

struct PropertyReport {
  std::uint64_t seed = 0;
  int size = 0;
  Fault fault = Fault::none;
  std::vector<PropertyResult> results;

  bool all_passed() const;
  const PropertyResult& find(const std::string& name) const;
};

std::vector<std::string> property_names();

PropertyReport run_properties(const PropertyOptions& opts = {});

nlohmann::ordered_json to_json(const PropertyReport& report);
std::string format_table(const PropertyReport& report);

}  // namespace hkw
