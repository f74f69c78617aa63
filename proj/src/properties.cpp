#include "hkw/properties.hpp"

#include <cmath>
#include <functional>
#include <iomanip>
#include <numeric>
#include <numbers>
#include <random>
#include <sstream>

#include "hkw/immersion.hpp"
#include "hkw/scene.hpp"

namespace hkw {

using Json = nlohmann::ordered_json;

namespace {

double mutant_pfaffian(const SkewMatrix& a) { return detail::skew_elimination_pfaffian<double>(a.entries(), false); }

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

std::string fmt(double v) {
  std::ostringstream out;
  out << std::setprecision(17) << v;
  return out.str();
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

Json matrix_snippet(const Matrix& m) { return Json{{"matrix", matrix_json(m)}}; }

Json scene_snippet(const std::vector<Subvariety>& xs, const std::vector<std::vector<std::string>>& chains = {}) {
  return to_json(make_scene(xs, chains));
}

struct Failure {
  std::string detail;
  std::optional<Json> counterexample;
};

using CaseResult = std::optional<Failure>;

struct Context {
  std::mt19937_64 rng;
  int size;
  DegreeOptions degree;
  std::vector<GeneratedChain> chains;

  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

  SkewMatrix skew(int dim) {
    Matrix a = Matrix::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
      for (int j = i + 1; j < dim; ++j) {
        a(i, j) = normal();
        a(j, i) = -a(i, j);
      }
    }
    return SkewMatrix(a);
  }

  Matrix gaussian(int rows, int cols) { return random_gaussian(rows, cols, rng); }

  SpacePtr space(int n) { return std::make_shared<const QuaternionicSpace>(standard_space(n)); }

  // Random I-complex plane presented by a random spanning basis rather than
  // an I-adapted one, so frames and pivots are generic.
  Subvariety complex_subvariety(std::string name = "X") {
    const auto x = random_complex_subvariety(space(pick(2, 3)), 2, rng, std::move(name));
    return Subvariety::make(x.space_ptr(), x.basis() * gaussian(4, 4), std::nullopt, x.name());
  }

  std::complex<double> unit_phase() { return std::polar(1.0, uniform(-std::numbers::pi, std::numbers::pi)); }

  std::array<double, 3> unit_coeffs() {
    std::array<double, 3> c{normal(), normal(), normal()};
    const double norm = std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
    for (auto& v : c) v /= norm;
    return c;
  }

  Matrix integer_lattice(int dim) {
    while (true) {
      Matrix m(dim, dim);
      for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) m(r, c) = pick(-3, 3);
      if (std::abs(m.determinant()) > 0.5) return m;
    }
  }
};

using PropertyFn = std::function<CaseResult(Context&, int)>;

struct Property {
  const char* name;
  PropertyFn fn;
};

// ---------------------------------------------------------------------------
// exterior algebra

CaseResult pfaffian_matches_oracle(Context& ctx, int) {
  const int dim = 2 * ctx.pick(1, kPfaffianOracleCutoff / 2);
  const SkewMatrix a = ctx.skew(dim);
  const double fast = ctx.degree.pfaffian(a);
  const double oracle = pfaffian_oracle(a);
  if (std::abs(fast - oracle) <= 1e-10 * (1.0 + std::abs(oracle))) return std::nullopt;
  return Failure{"dim " + std::to_string(dim) + ": fast " + fmt(fast) + " vs oracle " + fmt(oracle),
                 matrix_snippet(a.entries())};
}

CaseResult pfaffian_squared_is_determinant(Context& ctx, int) {
  const int dim = 2 * ctx.pick(1, 6);
  const SkewMatrix a = ctx.skew(dim);
  const double pf = ctx.degree.pfaffian(a);
  const double det = a.entries().determinant();
  if (std::abs(pf * pf - det) <= 1e-9 * std::max(1.0, std::abs(det))) return std::nullopt;
  return Failure{"Pf^2 " + fmt(pf * pf) + " vs det " + fmt(det), matrix_snippet(a.entries())};
}

CaseResult pfaffian_congruence(Context& ctx, int) {
  const int dim = 2 * ctx.pick(2, 4);
  const SkewMatrix a = ctx.skew(dim);
  const Matrix b = ctx.gaussian(dim, dim);
  const double lhs = ctx.degree.pfaffian(a.pullback(b));
  const double rhs = b.determinant() * ctx.degree.pfaffian(a);
  if (std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, std::abs(rhs))) return std::nullopt;
  return Failure{"Pf(B^T A B) " + fmt(lhs) + " vs det(B) Pf(A) " + fmt(rhs),
                 Json{{"matrix", matrix_json(a.entries())}, {"congruence", matrix_json(b)}}};
}

CaseResult top_coefficient_matches_wedge(Context& ctx, int) {
  const int d = ctx.pick(1, 4);
  const SkewMatrix a = ctx.skew(2 * d);
  const double wedge_top = form_power(a, d).top_coefficient();
  const double fast = factorial(d) * ctx.degree.pfaffian(a);
  if (std::abs(wedge_top - fast) <= 1e-10 * std::max(1.0, std::abs(wedge_top))) return std::nullopt;
  return Failure{"top coefficient " + fmt(wedge_top) + " vs d! Pf " + fmt(fast), matrix_snippet(a.entries())};
}

Multivector random_homogeneous(Context& ctx, int dim, int grade) {
  Multivector out(dim);
  std::vector<int> indices(dim);
  std::iota(indices.begin(), indices.end(), 0);
  for (int t = 0; t < 3; ++t) {
    std::shuffle(indices.begin(), indices.end(), ctx.rng);
    out.add_term(std::span<const int>(indices.data(), grade), ctx.normal());
  }
  return out;
}

CaseResult wedge_associative_anticommutative(Context& ctx, int) {
  const int dim = ctx.pick(3, 8);
  const int p = ctx.pick(0, 3);
  const int q = ctx.pick(0, 3);
  const int r = ctx.pick(0, 2);
  const auto a = random_homogeneous(ctx, dim, std::min(p, dim));
  const auto b = random_homogeneous(ctx, dim, std::min(q, dim));
  const auto c = random_homogeneous(ctx, dim, std::min(r, dim));
  if (!wedge(wedge(a, b), c).approx_equal(wedge(a, wedge(b, c)), 1e-12)) {
    return Failure{"associativity fails in dimension " + std::to_string(dim), std::nullopt};
  }
  const double sign = ((std::min(p, dim) * std::min(q, dim)) % 2 == 0) ? 1.0 : -1.0;
  if (!wedge(a, b).approx_equal(sign * wedge(b, a), 1e-12)) {
    return Failure{"graded anticommutativity fails for grades " + std::to_string(p) + ", " + std::to_string(q),
                   std::nullopt};
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// quaternionic linear algebra

CaseResult kahler_form_compatible(Context& ctx, int) {
  const auto s = standard_space(ctx.pick(1, 3));
  const auto l = induced_structure(s, ctx.unit_coeffs());
  const Matrix w = kahler_form(s, l).matrix.entries();
  const double skew = max_abs(w + w.transpose());
  const Vector x = ctx.gaussian(s.real_dim(), 1);
  const Vector y = ctx.gaussian(s.real_dim(), 1);
  const double invariance = std::abs((l.L * x).dot(w * (l.L * y)) - x.dot(w * y));
  if (skew <= 1e-10 && invariance <= 1e-10) return std::nullopt;
  return Failure{"skew residual " + fmt(skew) + ", L-invariance residual " + fmt(invariance), std::nullopt};
}

CaseResult rotation_composition(Context& ctx, int) {
  const auto s = standard_space(ctx.pick(1, 3));
  const auto a = ctx.unit_phase();
  const auto b = ctx.unit_phase();
  const auto twice = rotate_structure(rotate_structure(s, b), a);
  const auto once = rotate_structure(s, a * b);
  const double r = std::max(max_abs(twice.J() - once.J()), max_abs(twice.K() - once.K()));
  if (r <= 1e-10) return std::nullopt;
  return Failure{"composition residual " + fmt(r), std::nullopt};
}

CaseResult rotation_conjugates_Omega(Context& ctx, int) {
  const auto s = standard_space(ctx.pick(1, 3));
  const auto lambda = ctx.unit_phase();
  const auto rotated = rotate_structure(s, lambda);
  if (auto bad = check_quaternionic(rotated.I(), rotated.J(), rotated.K(), rotated.g(), 1e-10)) {
    return Failure{"rotated structure violates " + bad->identity, std::nullopt};
  }
  const ComplexMatrix got = holomorphic_symplectic_form(rotated).complex_matrix();
  const ComplexMatrix want = holomorphic_symplectic_form(s).scaled(std::conj(lambda)).complex_matrix();
  const double r = (got - want).cwiseAbs().maxCoeff();
  if (r <= 1e-10) return std::nullopt;
  return Failure{"Omega' - conj(lambda) Omega = " + fmt(r), std::nullopt};
}

CaseResult recover_round_trip(Context& ctx, int) {
  auto s = rotate_structure(standard_space(ctx.pick(1, 3)), ctx.unit_phase());
  const auto rec = recover_structure(s.g(), holomorphic_symplectic_form(s), s.I());
  if (const auto* f = std::get_if<StructureFailure>(&rec)) return Failure{"recovery failed: " + f->identity, std::nullopt};
  const auto& r = std::get<QuaternionicSpace>(rec);
  const double res = std::max(max_abs(r.J() - s.J()), max_abs(r.K() - s.K()));
  if (res <= 1e-10) return std::nullopt;
  return Failure{"round-trip residual " + fmt(res), std::nullopt};
}

CaseResult su2_invariance(Context& ctx, int) {
  const auto s = standard_space(ctx.pick(1, 2));
  const double reference = top_coefficient(kahler_form(s, FormLabel::omega_I).matrix, 2 * s.n());
  const auto l = induced_structure(s, ctx.unit_coeffs());
  const double top = top_coefficient(kahler_form(s, l).matrix, 2 * s.n());
  if (std::abs(top - reference) <= 1e-9 * std::abs(reference)) return std::nullopt;
  return Failure{"top coefficient " + fmt(top) + " vs " + fmt(reference), std::nullopt};
}

// ---------------------------------------------------------------------------
// subvarieties

CaseResult wirtinger_inequality(Context& ctx, int) {
  const auto x = ctx.complex_subvariety();
  const auto r = wirtinger_number(x, ctx.degree);
  if (r.deg_omega >= std::abs(r.deg_Omega) - 1e-9 * std::abs(r.deg_omega)) return std::nullopt;
  return Failure{"deg_omega " + fmt(r.deg_omega) + " < |deg_Omega| " + fmt(std::abs(r.deg_Omega)),
                 scene_snippet({x})};
}

CaseResult equality_iff_trianalytic(Context& ctx, int k) {
  const auto x = (k % 4 == 0) ? random_quaternionic_subvariety(ctx.space(ctx.pick(1, 3)), 1, ctx.rng, "X")
                              : ctx.complex_subvariety();
  const auto r = wirtinger_number(x, ctx.degree);
  const bool equal = r.wirtinger >= 1.0 - 1e-9;
  if (equal == is_trianalytic(x)) return std::nullopt;
  return Failure{"W = " + fmt(r.wirtinger) + " but trianalytic = " + (r.trianalytic ? "true" : "false"),
                 scene_snippet({x})};
}

CaseResult omega_degrees_agree(Context& ctx, int) {
  const auto x = ctx.complex_subvariety();
  const auto r = wirtinger_number(x, ctx.degree);
  DegreeOptions complex = ctx.degree;
  complex.strategy = DegreeStrategy::complex_pfaffian;
  const double via_pf = deg_Omega(x, complex);
  const double scale = std::abs(r.deg_omega);
  const double spread = std::max({std::abs(r.deg_omega_J - r.deg_omega_K), std::abs(r.deg_omega_J - via_pf),
                                  std::abs(r.deg_omega_K - via_pf)});
  if (spread <= 1e-8 * scale) return std::nullopt;
  return Failure{"omega_J " + fmt(r.deg_omega_J) + ", omega_K " + fmt(r.deg_omega_K) + ", Omega " + fmt(via_pf),
                 scene_snippet({x})};
}

CaseResult kahler_degree_normalization(Context& ctx, int) {
  auto x = ctx.complex_subvariety();
  x = x.with_lattice(ctx.gaussian(x.real_dim(), x.real_dim()));
  const double deg = deg_omega(x, ctx.degree);
  const double want = factorial(x.complex_dim()) * volume(x);
  if (std::abs(deg - want) <= 1e-9 * std::abs(want)) return std::nullopt;
  return Failure{"deg_omega " + fmt(deg) + " vs d! Vol " + fmt(want), scene_snippet({x})};
}

CaseResult lattice_invariance(Context& ctx, int) {
  const auto x = ctx.complex_subvariety();
  const auto sub = x.with_lattice(ctx.integer_lattice(x.real_dim())).with_name("Xsub");
  const double a = wirtinger_number(x, ctx.degree).wirtinger;
  const double b = wirtinger_number(sub, ctx.degree).wirtinger;
  if (std::abs(a - b) <= 1e-10) return std::nullopt;
  return Failure{"W " + fmt(a) + " vs sublattice W " + fmt(b), scene_snippet({x, sub})};
}

CaseResult rotation_covariance(Context& ctx, int) {
  const auto x = ctx.complex_subvariety();
  const auto rotated = std::make_shared<const QuaternionicSpace>(rotate_structure(x.space(), ctx.unit_phase()));
  const auto y = x.in_space(rotated);
  const double a = std::abs(deg_Omega(x, ctx.degree));
  const double b = std::abs(deg_Omega(y, ctx.degree));
  // Relative to deg_omega, the natural scale: |deg_Omega| itself may be tiny.
  if (std::abs(a - b) <= 1e-9 * std::abs(deg_omega(x, ctx.degree))) return std::nullopt;
  return Failure{"|deg_Omega| " + fmt(a) + " vs rotated " + fmt(b), scene_snippet({y})};
}

// ---------------------------------------------------------------------------
// chains and certificates

CaseResult chain_property(Context& ctx, int k, bool corollary) {
  if (ctx.chains.empty()) ctx.chains = generate_chain_suite(ctx.rng(), ctx.size);
  const auto& chain = ctx.chains[k];
  std::vector<std::string> names;
  for (const auto& e : chain.elements) names.push_back(e.name());
  const auto report = verify_chain(chain.elements, kDefaultComparisonTolerance, ctx.degree);
  for (std::size_t l = 0; l < report.links.size(); ++l) {
    const auto& link = report.links[l];
    if (link.status == LinkStatus::skipped_no_certificate) continue;
    const auto& outer = chain.elements[l + 1];
    if (!corollary && !(link.w_inner <= link.w_outer + kDefaultComparisonTolerance)) {
      return Failure{chain.family + " link " + link.edge.inner + " -> " + link.edge.outer + ": W " +
                         fmt(link.w_inner) + " > " + fmt(link.w_outer),
                     scene_snippet(chain.elements, {names})};
    }
    if (corollary && is_trianalytic(chain.elements[l])) {
      if (!(std::abs(link.w_outer - 1.0) <= kDefaultComparisonTolerance && is_trianalytic(outer))) {
        return Failure{chain.family + " link " + link.edge.inner + " -> " + link.edge.outer +
                           ": trianalytic inner but outer W = " + fmt(link.w_outer),
                       scene_snippet(chain.elements, {names})};
      }
    }
  }
  return std::nullopt;
}

CaseResult monotonicity(Context& ctx, int k) { return chain_property(ctx, k, false); }
CaseResult corollary(Context& ctx, int k) { return chain_property(ctx, k, true); }

CaseResult certificate_soundness(Context& ctx, int) {
  const auto x = ctx.complex_subvariety();
  const auto cert = linear_calabi_yau(x, ctx.degree);
  if (!cert.valid()) return Failure{"no certificate: " + cert.failure_reason(), scene_snippet({x})};
  const auto& st = cert.structure();
  const Matrix id = Matrix::Identity(st.real_dim(), st.real_dim());
  const double scale = std::max(1.0, cert.scale);
  const double r = std::max({max_abs(st.I() * st.J() - st.K()), max_abs(st.I() * st.I() + id),
                             max_abs(st.J() * st.J() + id), max_abs(st.K() * st.K() + id),
                             max_abs(st.I().transpose() * st.g() * st.I() - st.g()) / scale,
                             max_abs(st.J().transpose() * st.g() * st.J() - st.g()) / scale,
                             max_abs(st.K().transpose() * st.g() * st.K() - st.g()) / scale});
  const auto omega = holomorphic_symplectic_form(st);
  const double o = std::max(max_abs(omega.re.matrix.entries() - cert.restricted_Omega.re.matrix.entries()),
                            max_abs(omega.im.matrix.entries() - cert.restricted_Omega.im.matrix.entries()));
  if (r <= 1e-8 && o <= 1e-8) return std::nullopt;
  return Failure{"identity residual " + fmt(r) + ", Omega residual " + fmt(o), scene_snippet({x})};
}

CaseResult scale_correctness(Context& ctx, int) {
  auto x = ctx.complex_subvariety();
  x = x.with_lattice(ctx.gaussian(x.real_dim(), x.real_dim()));
  const auto cert = linear_calabi_yau(x, ctx.degree);
  if (!cert.valid()) return Failure{"no certificate: " + cert.failure_reason(), scene_snippet({x})};
  const TwoForm scaled{kahler_form(x.space(), FormLabel::omega_I).matrix * cert.scale, FormLabel::other};
  const double got = form_degree(scaled, x, ctx.degree);
  const double want = std::abs(deg_Omega(x, ctx.degree));
  if (std::abs(got - want) <= 1e-8 * std::abs(want)) return std::nullopt;
  return Failure{"rescaled Kahler degree " + fmt(got) + " vs |deg_Omega| " + fmt(want), scene_snippet({x})};
}

CaseResult degree_scaling(Context& ctx, int) {
  const auto x = ctx.complex_subvariety();
  const double c = ctx.uniform(0.1, 3.0);
  const auto omega = kahler_form(x.space(), FormLabel::omega_I);
  const TwoForm scaled{omega.matrix * c, FormLabel::other};
  const double got = form_degree(scaled, x, ctx.degree);
  const double want = std::pow(c, x.complex_dim()) * form_degree(omega, x, ctx.degree);
  if (std::abs(got - want) <= 1e-10 * std::abs(want)) return std::nullopt;
  return Failure{"c = " + fmt(c) + ": " + fmt(got) + " vs c^d deg " + fmt(want), scene_snippet({x})};
}

// ---------------------------------------------------------------------------
// scenes

CaseResult scene_round_trip(Context& ctx, int) {
  const auto space = ctx.space(ctx.pick(1, 3));
  std::vector<Subvariety> xs;
  const int count = ctx.pick(1, 4);
  for (int k = 0; k < count; ++k) {
    auto x = random_complex_subvariety(space, ctx.pick(1, space->n()), ctx.rng, "X" + std::to_string(k));
    if (ctx.pick(0, 1)) x = x.with_lattice(ctx.gaussian(x.real_dim(), x.real_dim()));
    xs.push_back(std::move(x));
  }
  std::vector<std::vector<std::string>> chains;
  if (ctx.pick(0, 1)) chains.push_back({xs.front().name(), xs.back().name()});
  SceneOptions options;
  if (ctx.pick(0, 1)) options.seed = static_cast<std::uint64_t>(ctx.pick(0, 1000));
  if (ctx.pick(0, 1)) options.tolerance = ctx.uniform(1e-12, 1e-6);
  if (ctx.pick(0, 1)) options.strategy = DegreeStrategy::complex_pfaffian;
  const Scene scene = make_scene(xs, chains, options);
  const std::string text = serialize(scene);
  const Scene back = parse_scene(std::string_view(text));
  if (back == scene && serialize(back) == text) return std::nullopt;
  return Failure{"scene changed on round trip", to_json(scene)};
}

const std::vector<Property>& properties() {
  static const std::vector<Property> list{
      {"pfaffian_matches_oracle", pfaffian_matches_oracle},
      {"pfaffian_squared_is_determinant", pfaffian_squared_is_determinant},
      {"pfaffian_congruence", pfaffian_congruence},
      {"top_coefficient_matches_wedge", top_coefficient_matches_wedge},
      {"wedge_associative_anticommutative", wedge_associative_anticommutative},
      {"kahler_form_compatible", kahler_form_compatible},
      {"rotation_composition", rotation_composition},
      {"rotation_conjugates_Omega", rotation_conjugates_Omega},
      {"recover_structure_round_trip", recover_round_trip},
      {"su2_invariance", su2_invariance},
      {"wirtinger_inequality", wirtinger_inequality},
      {"equality_iff_trianalytic", equality_iff_trianalytic},
      {"omega_degrees_agree", omega_degrees_agree},
      {"kahler_degree_normalization", kahler_degree_normalization},
      {"lattice_invariance", lattice_invariance},
      {"rotation_covariance", rotation_covariance},
      {"monotonicity", monotonicity},
      {"corollary", corollary},
      {"certificate_soundness", certificate_soundness},
      {"scale_correctness", scale_correctness},
      {"degree_scaling", degree_scaling},
      {"scene_round_trip", scene_round_trip},
  };
  return list;
}

}  // namespace

std::optional<Fault> parse_fault(const std::string& text) {
  if (text == "none") return Fault::none;
  if (text == "pfaffian-pivot-sign") return Fault::pfaffian_pivot_sign;
  return std::nullopt;
}

std::string to_string(Fault f) { return f == Fault::none ? "none" : "pfaffian-pivot-sign"; }

PfaffianKernel kernel_for(Fault f) {
  if (f == Fault::pfaffian_pivot_sign) return &mutant_pfaffian;
  return DegreeOptions{}.pfaffian;
}

bool PropertyReport::all_passed() const {
  return std::all_of(results.begin(), results.end(), [](const PropertyResult& r) { return r.passed; });
}

const PropertyResult& PropertyReport::find(const std::string& name) const {
  for (const auto& r : results) {
    if (r.name == name) return r;
  }
  throw Error("no property named " + name);
}

std::vector<std::string> property_names() {
  std::vector<std::string> names;
  for (const auto& p : properties()) names.emplace_back(p.name);
  return names;
}

PropertyReport run_properties(const PropertyOptions& opts) {
  if (opts.size < 1) throw Error("properties: size must be at least 1");
  PropertyReport report;
  report.seed = opts.seed;
  report.size = opts.size;
  report.fault = opts.fault;
  const auto& list = properties();
  for (std::size_t p = 0; p < list.size(); ++p) {
    std::seed_seq seq{static_cast<std::uint32_t>(opts.seed), static_cast<std::uint32_t>(opts.seed >> 32),
                      static_cast<std::uint32_t>(p)};
    Context ctx{std::mt19937_64(seq), opts.size, DegreeOptions{}, {}};
    ctx.degree.pfaffian = kernel_for(opts.fault);
    PropertyResult result;
    result.name = list[p].name;
    for (int k = 0; k < opts.size; ++k) {
      ++result.cases;
      CaseResult failure;
      try {
        failure = list[p].fn(ctx, k);
      } catch (const std::exception& e) {
        failure = Failure{std::string("case raised: ") + e.what(), std::nullopt};
      }
      if (failure) {
        result.passed = false;
        result.detail = "case " + std::to_string(k) + ": " + failure->detail;
        result.counterexample = std::move(failure->counterexample);
        break;
      }
    }
    report.results.push_back(std::move(result));
  }
  return report;
}

Json to_json(const PropertyReport& report) {
  Json doc;
  doc["metadata"] = {{"tool", "hkw"}, {"version", kToolVersion}, {"seed", report.seed}, {"size", report.size}};
  if (report.fault != Fault::none) doc["metadata"]["fault"] = to_string(report.fault);
  Json rows = Json::array();
  for (const auto& r : report.results) {
    Json j;
    j["name"] = r.name;
    j["status"] = r.passed ? "PASS" : "FAIL";
    j["cases"] = r.cases;
    if (!r.detail.empty()) j["detail"] = r.detail;
    if (r.counterexample) j["counterexample"] = *r.counterexample;
    rows.push_back(std::move(j));
  }
  doc["properties"] = std::move(rows);
  doc["all_passed"] = report.all_passed();
  return doc;
}

std::string format_table(const PropertyReport& report) {
  std::ostringstream out;
  out << "hkw " << kToolVersion << " properties  seed=" << report.seed << "  size=" << report.size;
  if (report.fault != Fault::none) out << "  fault=" << to_string(report.fault);
  out << "\n\n";
  for (const auto& r : report.results) {
    out << std::left << std::setw(36) << r.name << (r.passed ? "PASS" : "FAIL") << "  " << r.cases << " cases";
    if (!r.detail.empty()) out << "  " << r.detail;
    out << "\n";
    if (r.counterexample) out << "  counterexample:\n" << r.counterexample->dump(2) << "\n";
  }
  const auto failed = std::count_if(report.results.begin(), report.results.end(),
                                    [](const PropertyResult& r) { return !r.passed; });
  out << "\n" << report.results.size() - failed << "/" << report.results.size() << " properties passed\n";
  return out.str();
}

}  // namespace hkw
