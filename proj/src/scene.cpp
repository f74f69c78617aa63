#include "hkw/scene.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <iomanip>
#include <set>
#include <sstream>
#include <thread>

namespace hkw {

using Json = nlohmann::ordered_json;

namespace {

std::string index_path(const std::string& base, std::size_t k) { return base + "[" + std::to_string(k) + "]"; }

void require_keys(const Json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }) == allowed.end()) {
      throw SceneError(path, "unknown key \"" + key + "\"");
    }
  }
}

const Json& member(const Json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw SceneError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw SceneError(path, std::string("missing key \"") + key + "\"");
  return *it;
}

Matrix parse_matrix(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw SceneError(path, "expected a non-empty array of rows");
  std::size_t cols = 0;
  for (std::size_t r = 0; r < j.size(); ++r) {
    const auto& row = j[r];
    if (!row.is_array() || row.empty()) throw SceneError(index_path(path, r), "expected a non-empty array of numbers");
    if (r == 0) cols = row.size();
    if (row.size() != cols) {
      throw SceneError(index_path(path, r), "row has length " + std::to_string(row.size()) + ", expected " +
                                                std::to_string(cols));
    }
  }
  Matrix m(j.size(), cols);
  for (std::size_t r = 0; r < j.size(); ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const auto& v = j[r][c];
      if (!v.is_number()) throw SceneError(index_path(index_path(path, r), c), "expected a number");
      m(r, c) = v.get<double>();
    }
  }
  return m;
}

Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

bool same_matrix(const Matrix& a, const Matrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a.size() == 0 || a == b);
}

bool same_optional_matrix(const std::optional<Matrix>& a, const std::optional<Matrix>& b) {
  if (a.has_value() != b.has_value()) return false;
  return !a || same_matrix(*a, *b);
}

SpaceSpec parse_space(const Json& j) {
  const std::string path = "space";
  if (!j.is_object()) throw SceneError(path, "expected an object");
  require_keys(j, path, {"n", "structure"});
  const auto& n = member(j, "n", path);
  if (!n.is_number_integer() || n.get<long long>() < 1) throw SceneError(path + ".n", "expected a positive integer");
  SpaceSpec spec;
  spec.n = n.get<int>();
  const auto& structure = member(j, "structure", path);
  if (structure.is_string()) {
    if (structure.get<std::string>() != "standard") {
      throw SceneError(path + ".structure", "expected \"standard\" or an object of matrices");
    }
    return spec;
  }
  if (!structure.is_object()) throw SceneError(path + ".structure", "expected \"standard\" or an object of matrices");
  require_keys(structure, path + ".structure", {"I", "J", "K", "g"});
  spec.standard = false;
  const int m = 4 * spec.n;
  auto read = [&](const char* key) {
    const std::string p = path + ".structure." + key;
    Matrix x = parse_matrix(member(structure, key, path + ".structure"), p);
    if (x.rows() != m || x.cols() != m) {
      throw SceneError(p, "expected a " + std::to_string(m) + "x" + std::to_string(m) + " matrix");
    }
    return x;
  };
  spec.I = read("I");
  spec.J = read("J");
  spec.K = read("K");
  spec.g = read("g");
  return spec;
}

SpacePtr build_space(const SpaceSpec& spec) {
  if (spec.standard) return std::make_shared<const QuaternionicSpace>(standard_space(spec.n));
  try {
    return std::make_shared<const QuaternionicSpace>(QuaternionicSpace::make(spec.I, spec.J, spec.K, spec.g));
  } catch (const StructureError& e) {
    throw SceneError("space.structure", e.what());
  }
}

template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const std::size_t workers = std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(count, 1));
  auto run = [&](std::size_t w) {
    for (std::size_t k = w; k < count; k += workers) fn(k);
  };
  if (workers == 1) {
    run(0);
    return;
  }
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t k = 0; k < parts.size(); ++k) out += (k ? sep : "") + parts[k];
  return out;
}

}  // namespace

const Subvariety& Scene::find(const std::string& name) const {
  for (const auto& x : subvarieties) {
    if (x.name() == name) return x;
  }
  throw SceneError("", "unresolved name " + name);
}

bool operator==(const Scene& a, const Scene& b) {
  const auto& sa = a.space_spec;
  const auto& sb = b.space_spec;
  if (sa.n != sb.n || sa.standard != sb.standard) return false;
  if (!sa.standard && !(same_matrix(sa.I, sb.I) && same_matrix(sa.J, sb.J) && same_matrix(sa.K, sb.K) &&
                        same_matrix(sa.g, sb.g))) {
    return false;
  }
  if (a.subvariety_specs.size() != b.subvariety_specs.size()) return false;
  for (std::size_t k = 0; k < a.subvariety_specs.size(); ++k) {
    const auto& x = a.subvariety_specs[k];
    const auto& y = b.subvariety_specs[k];
    if (x.name != y.name || !same_matrix(x.basis_rows, y.basis_rows) || !same_optional_matrix(x.lattice, y.lattice)) {
      return false;
    }
  }
  return a.chains == b.chains && a.options.seed == b.options.seed && a.options.tolerance == b.options.tolerance &&
         a.options.strategy == b.options.strategy;
}

Scene parse_scene(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SceneError("", std::string("invalid JSON: ") + e.what());
  }
  return parse_scene(doc);
}

Scene parse_scene(const Json& doc) {
  if (!doc.is_object()) throw SceneError("", "scene must be a JSON object");
  require_keys(doc, "", {"space", "subvarieties", "chains", "options"});
  Scene scene;
  scene.space_spec = parse_space(member(doc, "space", ""));
  scene.space = build_space(scene.space_spec);
  const int ambient = 4 * scene.space_spec.n;

  const auto& subs = member(doc, "subvarieties", "");
  if (!subs.is_array()) throw SceneError("subvarieties", "expected an array");
  std::set<std::string> names;
  for (std::size_t k = 0; k < subs.size(); ++k) {
    const std::string path = index_path("subvarieties", k);
    const auto& entry = subs[k];
    if (!entry.is_object()) throw SceneError(path, "expected an object");
    require_keys(entry, path, {"name", "basis", "lattice"});
    const auto& name = member(entry, "name", path);
    if (!name.is_string() || name.get<std::string>().empty()) throw SceneError(path + ".name", "expected a non-empty string");
    SubvarietySpec spec;
    spec.name = name.get<std::string>();
    if (!names.insert(spec.name).second) throw SceneError(path + ".name", "duplicate name " + spec.name);
    spec.basis_rows = parse_matrix(member(entry, "basis", path), path + ".basis");
    if (spec.basis_rows.cols() != ambient) {
      throw SceneError(path + ".basis", "rows have length " + std::to_string(spec.basis_rows.cols()) +
                                            ", ambient dimension is " + std::to_string(ambient));
    }
    if (auto it = entry.find("lattice"); it != entry.end()) {
      spec.lattice = parse_matrix(*it, path + ".lattice");
    }
    try {
      scene.subvarieties.push_back(Subvariety::make(scene.space, spec.basis_rows.transpose(), spec.lattice, spec.name));
    } catch (const Error& e) {
      throw SceneError(path, e.what());
    }
    const int d = scene.subvarieties.back().complex_dim();
    if (d % 2 != 0) {
      scene.warnings.push_back(path + ": " + spec.name + " has odd complex dimension " + std::to_string(d) +
                               "; its degrees are undefined");
    }
    scene.subvariety_specs.push_back(std::move(spec));
  }

  if (auto it = doc.find("chains"); it != doc.end()) {
    if (!it->is_array()) throw SceneError("chains", "expected an array of name arrays");
    for (std::size_t c = 0; c < it->size(); ++c) {
      const std::string path = index_path("chains", c);
      const auto& chain = (*it)[c];
      if (!chain.is_array() || chain.empty()) throw SceneError(path, "expected a non-empty array of names");
      std::vector<std::string> members;
      for (std::size_t k = 0; k < chain.size(); ++k) {
        if (!chain[k].is_string()) throw SceneError(index_path(path, k), "expected a name");
        const std::string name = chain[k].get<std::string>();
        if (!names.contains(name)) throw SceneError(index_path(path, k), "unresolved name " + name);
        members.push_back(name);
      }
      scene.chains.push_back(std::move(members));
    }
  }

  if (auto it = doc.find("options"); it != doc.end()) {
    const std::string path = "options";
    if (!it->is_object()) throw SceneError(path, "expected an object");
    require_keys(*it, path, {"seed", "tolerance", "strategy"});
    if (auto s = it->find("seed"); s != it->end()) {
      if (!s->is_number_integer() || s->get<long long>() < 0) throw SceneError(path + ".seed", "expected a non-negative integer");
      scene.options.seed = s->get<std::uint64_t>();
    }
    if (auto t = it->find("tolerance"); t != it->end()) {
      if (!t->is_number() || !(t->get<double>() > 0.0)) throw SceneError(path + ".tolerance", "expected a positive number");
      scene.options.tolerance = t->get<double>();
    }
    if (auto s = it->find("strategy"); s != it->end()) {
      auto strategy = s->is_string() ? parse_strategy(s->get<std::string>()) : std::nullopt;
      if (!strategy) {
        throw SceneError(path + ".strategy", "expected one of pfaffian-of-omega-j, complex-pfaffian, oracle");
      }
      scene.options.strategy = strategy;
    }
  }
  return scene;
}

Json to_json(const Scene& scene) {
  Json doc;
  Json space;
  space["n"] = scene.space_spec.n;
  if (scene.space_spec.standard) {
    space["structure"] = "standard";
  } else {
    space["structure"] = {{"I", matrix_json(scene.space_spec.I)},
                          {"J", matrix_json(scene.space_spec.J)},
                          {"K", matrix_json(scene.space_spec.K)},
                          {"g", matrix_json(scene.space_spec.g)}};
  }
  doc["space"] = std::move(space);
  Json subs = Json::array();
  for (const auto& spec : scene.subvariety_specs) {
    Json entry;
    entry["name"] = spec.name;
    entry["basis"] = matrix_json(spec.basis_rows);
    if (spec.lattice) entry["lattice"] = matrix_json(*spec.lattice);
    subs.push_back(std::move(entry));
  }
  doc["subvarieties"] = std::move(subs);
  if (!scene.chains.empty()) doc["chains"] = scene.chains;
  Json options = Json::object();
  if (scene.options.seed) options["seed"] = *scene.options.seed;
  if (scene.options.tolerance) options["tolerance"] = *scene.options.tolerance;
  if (scene.options.strategy) options["strategy"] = to_string(*scene.options.strategy);
  if (!options.empty()) doc["options"] = std::move(options);
  return doc;
}

std::string serialize(const Scene& scene) { return to_json(scene).dump(2) + "\n"; }

Scene make_scene(const std::vector<Subvariety>& subvarieties, const std::vector<std::vector<std::string>>& chains,
                 SceneOptions options) {
  if (subvarieties.empty()) throw Error("make_scene: no subvarieties");
  const auto& space = subvarieties.front().space();
  Json doc;
  Json space_json;
  space_json["n"] = space.n();
  const auto standard = standard_space(space.n());
  const bool is_standard = space.I() == standard.I() && space.J() == standard.J() && space.K() == standard.K() &&
                           space.g() == standard.g();
  if (is_standard) {
    space_json["structure"] = "standard";
  } else {
    space_json["structure"] = {{"I", matrix_json(space.I())},
                               {"J", matrix_json(space.J())},
                               {"K", matrix_json(space.K())},
                               {"g", matrix_json(space.g())}};
  }
  doc["space"] = std::move(space_json);
  Json subs = Json::array();
  for (const auto& x : subvarieties) {
    Json entry;
    entry["name"] = x.name();
    entry["basis"] = matrix_json(x.basis().transpose());
    if (!x.lattice().isIdentity(0.0)) entry["lattice"] = matrix_json(x.lattice());
    subs.push_back(std::move(entry));
  }
  doc["subvarieties"] = std::move(subs);
  if (!chains.empty()) doc["chains"] = chains;
  Scene scene = parse_scene(doc);
  scene.options = options;
  return scene;
}

// ---------------------------------------------------------------------------
// Running scenes

bool SubvarietyRow::violation() const {
  return error.empty() && !(inequality_holds && equality_consistent && normalization_holds && strategies_agree);
}

int Report::violations() const {
  int n = 0;
  for (const auto& row : subvarieties) n += row.violation();
  for (const auto& row : chains) n += row.error.empty() && row.report && !row.report->pass;
  return n;
}

int Report::errors() const {
  int n = 0;
  for (const auto& row : subvarieties) n += !row.error.empty();
  for (const auto& row : chains) n += !row.error.empty();
  return n;
}

int exit_code(const Report& report) {
  if (report.errors() > 0) return 2;
  return report.violations() > 0 ? 1 : 0;
}

Report run_scene(const Scene& scene, const RunOptions& opts) {
  Report report;
  report.seed = scene.options.seed.value_or(0);
  report.tolerance = opts.tolerance.value_or(scene.options.tolerance.value_or(kDefaultComparisonTolerance));
  report.oracle = opts.oracle;
  report.strategy = scene.options.strategy.value_or(opts.degree.strategy);
  report.warnings = scene.warnings;
  const double tol = report.tolerance;
  DegreeOptions degree = opts.degree;
  degree.strategy = report.strategy;

  report.subvarieties.resize(scene.subvarieties.size());
  parallel_for(scene.subvarieties.size(), [&](std::size_t k) {
    const Subvariety& x = scene.subvarieties[k];
    SubvarietyRow& row = report.subvarieties[k];
    row.name = x.name();
    try {
      const DegreeReport r = wirtinger_number(x, degree);
      row.inequality_holds = r.deg_omega >= std::abs(r.deg_Omega) - tol * std::abs(r.deg_omega);
      row.equality_consistent = (r.wirtinger >= 1.0 - tol) == r.trianalytic;
      row.normalization_holds = std::abs(r.deg_omega - factorial(r.d) * r.volume) <= tol * std::abs(r.deg_omega);
      if (opts.oracle) {
        for (auto s : {DegreeStrategy::pfaffian_omega_j, DegreeStrategy::complex_pfaffian, DegreeStrategy::oracle}) {
          if (s == DegreeStrategy::oracle && 2 * r.d > kWedgeOracleCutoff) continue;
          DegreeOptions o = degree;
          o.strategy = s;
          row.strategies.emplace_back(to_string(s), deg_Omega(x, o));
        }
        double lo = row.strategies.front().second;
        double hi = lo;
        for (const auto& [name, value] : row.strategies) {
          lo = std::min(lo, value);
          hi = std::max(hi, value);
        }
        row.strategy_spread = (hi - lo) / std::abs(r.deg_omega);
        row.strategies_agree = row.strategy_spread <= 1e-8;
      }
      row.report = r;
    } catch (const Error& e) {
      row.error = e.what();
    }
  });

  report.chains.resize(scene.chains.size());
  parallel_for(scene.chains.size(), [&](std::size_t k) {
    ChainRow& row = report.chains[k];
    row.members = scene.chains[k];
    try {
      std::vector<Subvariety> chain;
      for (const auto& name : row.members) chain.push_back(scene.find(name));
      row.report = verify_chain(chain, tol, degree);
    } catch (const Error& e) {
      row.error = "chain " + std::to_string(k) + " [" + join(row.members, " -> ") + "]: " + e.what();
    }
  });
  return report;
}

Json to_json(const Report& report) {
  Json doc;
  doc["metadata"] = {{"tool", "hkw"},
                     {"version", kToolVersion},
                     {"seed", report.seed},
                     {"tolerance", report.tolerance},
                     {"oracle", report.oracle},
                     {"strategy", to_string(report.strategy)}};
  doc["warnings"] = report.warnings;
  Json rows = Json::array();
  for (const auto& row : report.subvarieties) {
    Json j;
    j["name"] = row.name;
    if (!row.error.empty()) {
      j["error"] = row.error;
      rows.push_back(std::move(j));
      continue;
    }
    const auto& r = *row.report;
    j["d"] = r.d;
    j["volume"] = r.volume;
    j["deg_omega"] = r.deg_omega;
    j["deg_Omega"] = r.deg_Omega;
    j["deg_omega_J"] = r.deg_omega_J;
    j["deg_omega_K"] = r.deg_omega_K;
    j["wirtinger"] = r.wirtinger;
    j["trianalytic"] = r.trianalytic;
    j["checks"] = {{"wirtinger_inequality", row.inequality_holds},
                   {"equality_iff_trianalytic", row.equality_consistent},
                   {"kahler_degree_normalization", row.normalization_holds}};
    if (report.oracle) {
      Json s = Json::object();
      for (const auto& [name, value] : row.strategies) s[name] = value;
      j["strategies"] = std::move(s);
      j["strategy_spread"] = row.strategy_spread;
      j["checks"]["strategies_agree"] = row.strategies_agree;
    }
    rows.push_back(std::move(j));
  }
  doc["subvarieties"] = std::move(rows);

  Json chains = Json::array();
  for (const auto& row : report.chains) {
    Json j;
    j["members"] = row.members;
    if (!row.error.empty()) {
      j["verdict"] = "ERROR";
      j["error"] = row.error;
      chains.push_back(std::move(j));
      continue;
    }
    const auto& c = *row.report;
    j["verdict"] = c.pass ? "PASS" : "FAIL";
    j["certified_links"] = c.certified_links();
    j["skipped_links"] = c.skipped_links();
    Json links = Json::array();
    for (const auto& l : c.links) {
      Json lj;
      lj["inner"] = l.edge.inner;
      lj["outer"] = l.edge.outer;
      lj["symplectic"] = l.edge.symplectic;
      lj["w_inner"] = l.w_inner;
      lj["w_outer"] = l.w_outer;
      lj["status"] = to_string(l.status);
      if (l.corollary_applies) lj["trianalytic_inner_forces_trianalytic_outer"] = l.corollary_holds;
      if (!l.reason.empty()) lj["reason"] = l.reason;
      links.push_back(std::move(lj));
    }
    j["links"] = std::move(links);
    chains.push_back(std::move(j));
  }
  doc["chains"] = std::move(chains);
  doc["summary"] = {{"violations", report.violations()}, {"errors", report.errors()}};
  return doc;
}

std::string format_table(const Report& report) {
  std::ostringstream out;
  out << std::setprecision(6);
  out << "hkw " << kToolVersion << "  seed=" << report.seed << "  tolerance=" << report.tolerance
      << "  strategy=" << to_string(report.strategy) << (report.oracle ? "  oracle" : "") << "\n";
  for (const auto& w : report.warnings) out << "warning: " << w << "\n";
  if (!report.subvarieties.empty()) {
    out << "\n"
        << std::left << std::setw(14) << "name" << std::right << std::setw(4) << "d" << std::setw(14) << "volume"
        << std::setw(14) << "deg_omega" << std::setw(14) << "deg_Omega" << std::setw(14) << "W" << std::setw(13)
        << "trianalytic"
        << "  checks\n";
  }
  for (const auto& row : report.subvarieties) {
    out << std::left << std::setw(14) << row.name << std::right;
    if (!row.error.empty()) {
      out << "  ERROR " << row.error << "\n";
      continue;
    }
    const auto& r = *row.report;
    out << std::setw(4) << r.d << std::setw(14) << r.volume << std::setw(14) << r.deg_omega << std::setw(14)
        << r.deg_Omega << std::setw(14) << r.wirtinger << std::setw(13) << (r.trianalytic ? "yes" : "no") << "  "
        << (row.violation() ? "VIOLATION" : "ok");
    if (report.oracle) out << "  spread=" << row.strategy_spread;
    out << "\n";
  }
  for (const auto& row : report.chains) {
    out << "\nchain [" << join(row.members, " -> ") << "]: ";
    if (!row.error.empty()) {
      out << "ERROR " << row.error << "\n";
      continue;
    }
    const auto& c = *row.report;
    out << (c.pass ? "PASS" : "FAIL") << "  (" << c.certified_links() << " certified, " << c.skipped_links()
        << " skipped)\n";
    for (const auto& l : c.links) {
      out << "  " << l.edge.inner << " -> " << l.edge.outer << "  W " << l.w_inner << " <= " << l.w_outer << "  "
          << to_string(l.status);
      if (!l.reason.empty()) out << "  (" << l.reason << ")";
      out << "\n";
    }
  }
  out << "\nsummary: " << report.violations() << " violations, " << report.errors() << " errors\n";
  return out.str();
}

}  // namespace hkw
