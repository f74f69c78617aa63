#include "hkw/immersion.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace hkw {

namespace {

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

bool nondegenerate(const ComplexMatrix& c, std::complex<double> pf) {
  if (c.size() == 0 || c.rows() % 2 != 0) return false;
  const double entry = c.cwiseAbs().maxCoeff();
  if (entry == 0.0) return false;
  return std::abs(pf) > kNondegeneracyTolerance * std::pow(entry, static_cast<double>(c.rows()) / 2.0);
}

std::string link_name(std::size_t k, const Subvariety& inner, const Subvariety& outer) {
  return "link " + std::to_string(k) + " (" + inner.name() + " -> " + outer.name() + ")";
}

}  // namespace

ImmersionEdge is_symplectic_immersion(const Subvariety& inner, const Subvariety& outer) {
  if (inner.space().real_dim() != outer.space().real_dim()) {
    throw DimensionError("is_symplectic_immersion: " + inner.name() + " and " + outer.name() +
                         " live in different ambient spaces");
  }
  ImmersionEdge edge;
  edge.inner = inner.name();
  edge.outer = outer.name();
  const Matrix& g = outer.space().g();
  const Matrix q_in = orthonormal_frame(inner);
  const Matrix q_out = orthonormal_frame(outer);
  edge.inclusion_residual = max_abs(q_in - q_out * (q_out.transpose() * g * q_in));
  if (edge.inclusion_residual > kInclusionTolerance) {
    throw StructureError(inner.name() + " is not contained in " + outer.name() + " (residual " +
                         std::to_string(edge.inclusion_residual) + ")");
  }
  if (inner.complex_dim() % 2 != 0) return edge;
  const ComplexMatrix c = restricted_complex_form(holomorphic_symplectic_form(outer.space()), inner);
  edge.restricted_pfaffian = pfaffian(c);
  edge.symplectic = nondegenerate(c, edge.restricted_pfaffian);
  return edge;
}

std::string HKCertificate::failure_reason() const {
  if (valid()) return {};
  const auto& f = std::get<StructureFailure>(recovered);
  return "recovered structure violates " + f.identity + " (residual " + std::to_string(f.residual) + ")";
}

HKCertificate linear_calabi_yau(const Subvariety& x, const DegreeOptions& opts) {
  const int d = x.complex_dim();
  if (d < 2 || d % 2 != 0) {
    throw DegreeError("linear_calabi_yau: " + x.name() + " has odd complex dimension " + std::to_string(d));
  }
  const QuaternionicSpace& space = x.space();
  const Matrix u = unitary_frame(x);
  const ComplexTwoForm omega = holomorphic_symplectic_form(space);

  const ComplexMatrix c = restricted_complex_form(omega, x);
  const std::complex<double> pf = pfaffian(c);
  if (!nondegenerate(c, pf)) {
    throw DegreeError("linear_calabi_yau: Omega restricts degenerately to " + x.name() +
                      "; certificate inapplicable");
  }

  HKCertificate cert;
  cert.subject = x.name();
  cert.scale = wirtinger_number(x, opts).wirtinger;
  cert.frame = u;
  cert.restricted_I = u.transpose() * space.g() * space.I() * u;
  cert.restricted_Omega = {{omega.re.matrix.pullback(u), FormLabel::omega_J},
                           {omega.im.matrix.pullback(u), FormLabel::omega_K}};
  // Pf(lambda C) = lambda^{d/2} Pf(C) is real positive for this phase.
  cert.phase = std::polar(1.0, -std::arg(pf) / (d / 2));

  const Matrix metric = cert.scale * Matrix::Identity(2 * d, 2 * d);
  Recovery rotated = recover_structure(metric, cert.restricted_Omega.scaled(cert.phase), cert.restricted_I);
  if (auto* recovered = std::get_if<QuaternionicSpace>(&rotated)) {
    // The recovered structure carries phase * Omega; rotating back by the
    // same phase gives conj(phase) * phase * Omega = Omega.
    cert.recovered = rotate_structure(*recovered, cert.phase);
  } else {
    cert.recovered = std::move(rotated);
  }
  return cert;
}

std::string to_string(LinkStatus s) {
  switch (s) {
    case LinkStatus::pass:
      return "PASS";
    case LinkStatus::fail:
      return "FAIL";
    case LinkStatus::skipped_no_certificate:
      return "SKIPPED-NO-CERTIFICATE";
  }
  return "UNKNOWN";
}

int ChainReport::certified_links() const {
  int n = 0;
  for (const auto& l : links) n += l.status != LinkStatus::skipped_no_certificate;
  return n;
}

int ChainReport::skipped_links() const { return static_cast<int>(links.size()) - certified_links(); }

ChainReport verify_chain(std::span<const Subvariety> chain, double tolerance, const DegreeOptions& opts) {
  if (chain.empty()) throw Error("verify_chain: empty chain");
  ChainReport report;
  for (const auto& x : chain) {
    report.members.push_back(x.name());
    if (x.complex_dim() < 2 || x.complex_dim() % 2 != 0) {
      throw DegreeError("verify_chain: element " + x.name() + " has complex dimension " +
                        std::to_string(x.complex_dim()) + "; chains need even dimension >= 2");
    }
  }

  std::vector<ImmersionEdge> edges;
  for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
    try {
      edges.push_back(is_symplectic_immersion(chain[k], chain[k + 1]));
    } catch (const Error& e) {
      throw StructureError(link_name(k, chain[k], chain[k + 1]) + ": " + e.what());
    }
    if (!edges.back().symplectic) {
      throw StructureError(link_name(k, chain[k], chain[k + 1]) + ": Omega restricts degenerately to " +
                           chain[k].name() + "; not a symplectic immersion");
    }
  }

  report.reports = wirtinger_numbers(chain, opts);

  for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
    LinkVerdict link;
    link.edge = edges[k];
    link.w_inner = report.reports[k].wirtinger;
    link.w_outer = report.reports[k + 1].wirtinger;

    std::optional<HKCertificate> cert;
    try {
      cert = linear_calabi_yau(chain[k + 1], opts);
    } catch (const DegreeError& e) {
      link.reason = e.what();
    }
    if (cert && !cert->valid()) link.reason = cert->failure_reason();

    if (cert && cert->valid()) {
      link.status = link.w_inner <= link.w_outer + tolerance ? LinkStatus::pass : LinkStatus::fail;
      if (link.status == LinkStatus::fail) {
        link.reason = "W(" + chain[k].name() + ") > W(" + chain[k + 1].name() + ")";
      }
      if (report.reports[k].trianalytic) {
        link.corollary_applies = true;
        link.corollary_holds = std::abs(link.w_outer - 1.0) <= tolerance && report.reports[k + 1].trianalytic;
        if (!link.corollary_holds) {
          link.status = LinkStatus::fail;
          link.reason = "trianalytic " + chain[k].name() + " inside certified " + chain[k + 1].name() +
                        " but the latter is not trianalytic";
        }
      }
    } else {
      link.status = LinkStatus::skipped_no_certificate;
    }
    report.pass = report.pass && link.status != LinkStatus::fail;
    report.links.push_back(std::move(link));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Chain generator

namespace {

Matrix identity_columns(int n, std::initializer_list<int> coords) {
  Matrix b(4 * n, 4 * static_cast<int>(coords.size()));
  int c = 0;
  for (int coord : coords) {
    for (int unit = 0; unit < 4; ++unit) b.col(c++) = unit_vector(n, coord, unit);
  }
  return b;
}

Matrix hstack(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows(), a.cols() + b.cols());
  out << a, b;
  return out;
}

GeneratedChain trianalytic_chain(const SpacePtr& space, std::mt19937_64& rng) {
  const Matrix v = random_gaussian(space->real_dim(), 2, rng);
  return {"trianalytic",
          {quaternionic_span(space, v.leftCols(1), "Q1"), quaternionic_span(space, v, "Q2"),
           Subvariety::make(space, Matrix::Identity(space->real_dim(), space->real_dim()), std::nullopt, "M")}};
}

GeneratedChain interpolating_chain(const SpacePtr& space, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, 0.45 * std::numbers::pi);
  const int n = space->n();
  return {"interpolating",
          {interpolating_subvariety(space, angle(rng), 0, 1, "V"),
           Subvariety::make(space, identity_columns(n, {0, 1}), std::nullopt, "H01"),
           Subvariety::make(space, Matrix::Identity(4 * n, 4 * n), std::nullopt, "M")}};
}

GeneratedChain trianalytic_inner_chain(const SpacePtr& space, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, 0.45 * std::numbers::pi);
  std::bernoulli_distribution aligned(0.5);
  const int n = space->n();
  const double theta = aligned(rng) ? 0.0 : angle(rng);
  const Matrix line = identity_columns(n, {0});
  const Subvariety v = interpolating_subvariety(space, theta, 1, 2);
  return {"trianalytic-inner",
          {Subvariety::make(space, line, std::nullopt, "H0"),
           Subvariety::make(space, hstack(line, v.basis()), std::nullopt, "H0+V"),
           Subvariety::make(space, Matrix::Identity(4 * n, 4 * n), std::nullopt, "M")}};
}

GeneratedChain generic_chain(const SpacePtr& space, std::mt19937_64& rng) {
  const Matrix v = random_gaussian(space->real_dim(), 4, rng);
  return {"generic",
          {complex_span(space, v.leftCols(2), "X2"), complex_span(space, v, "X4"),
           Subvariety::make(space, Matrix::Identity(space->real_dim(), space->real_dim()), std::nullopt, "M")}};
}

// Y = V_theta (+) V_theta on two disjoint pairs of coordinates has Omega|_Y
// with equal singular values cos(theta): certified with scale cos(theta)
// without being trianalytic. The inner element is a random complex plane of Y.
GeneratedChain uniform_scale_chain(const SpacePtr& space, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.05, 0.4 * std::numbers::pi);
  const int n = space->n();
  const double theta = angle(rng);
  const Subvariety a = interpolating_subvariety(space, theta, 0, 1);
  const Subvariety b = interpolating_subvariety(space, theta, 2, 3);
  const Subvariety y = Subvariety::make(space, hstack(a.basis(), b.basis()), std::nullopt, "Y");
  const Matrix yq = orthonormal_frame(y);
  const ComplexTwoForm omega = holomorphic_symplectic_form(*space);
  for (;;) {
    const Subvariety inner = complex_span(space, yq * random_gaussian(8, 2, rng), "P");
    const ComplexMatrix c = restricted_complex_form(omega, inner);
    // Keep the inner plane comfortably nondegenerate.
    if (std::abs(pfaffian(c)) > 0.05) {
      return {"uniform-scale",
              {inner, y, Subvariety::make(space, Matrix::Identity(4 * n, 4 * n), std::nullopt, "M")}};
    }
  }
}

}  // namespace

std::vector<GeneratedChain> generate_chain_suite(std::uint64_t seed, int count) {
  if (count < 1) throw Error("generate_chain_suite: count must be positive");
  std::mt19937_64 rng(seed);
  const auto h3 = std::make_shared<const QuaternionicSpace>(standard_space(3));
  const auto h4 = std::make_shared<const QuaternionicSpace>(standard_space(4));
  std::vector<GeneratedChain> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    switch (k % 5) {
      case 0:
        out.push_back(trianalytic_chain(h3, rng));
        break;
      case 1:
        out.push_back(interpolating_chain(h3, rng));
        break;
      case 2:
        out.push_back(trianalytic_inner_chain(h3, rng));
        break;
      case 3:
        out.push_back(generic_chain(h3, rng));
        break;
      default:
        out.push_back(uniform_scale_chain(h4, rng));
        break;
    }
  }
  return out;
}

}  // namespace hkw
