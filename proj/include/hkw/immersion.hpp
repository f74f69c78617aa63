#pragma once

// Nested flat subvarieties X_1 c X_2 c ... c X_n, each pulling Omega back
// nondegenerately, and the monotonicity W(X_1) <= ... <= W(X_n).
//
// A link is only checked when its outer element carries an HKCertificate:
// the restricted metric rescaled by W, together with the restricted Omega,
// must assemble into an honest quaternionic-Hermitian structure. Links
// without one are reported as skipped.

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hkw/subvariety.hpp"

namespace hkw {

inline constexpr double kInclusionTolerance = 1e-10;
inline constexpr double kNondegeneracyTolerance = 1e-10;
inline constexpr double kDefaultComparisonTolerance = 1e-9;

struct ImmersionEdge {
  std::string inner;
  std::string outer;
  double inclusion_residual = 0.0;
  /// Pf of Omega restricted to inner, in a unitary frame.
  std::complex<double> restricted_pfaffian;
  bool symplectic = false;
};

/// Throws if inner is not contained in outer.
ImmersionEdge is_symplectic_immersion(const Subvariety& inner, const Subvariety& outer);

/// Flat stand-in for the Calabi-Yau step: (scale * g|_V, I|_V, Omega|_V).
/// Restricted objects are expressed in the unitary frame of the subject.
struct HKCertificate {
  std::string subject;
  double scale = 0.0;
  /// Unit phase with Pf(phase * Omega|_V) real and positive.
  std::complex<double> phase{1.0, 0.0};
  Matrix frame;
  Matrix restricted_I;
  ComplexTwoForm restricted_Omega;
  /// On success the structure (I, J, K, scale * Id) whose holomorphic
  /// symplectic form is restricted_Omega.
  Recovery recovered = StructureFailure{"not computed", 0.0};

  bool valid() const { return std::holds_alternative<QuaternionicSpace>(recovered); }
  const QuaternionicSpace& structure() const { return std::get<QuaternionicSpace>(recovered); }
  std::string failure_reason() const;
};

/// Throws DegreeError when d is odd or Omega restricts degenerately.
HKCertificate linear_calabi_yau(const Subvariety& x, const DegreeOptions& opts = {});

enum class LinkStatus { pass, fail, skipped_no_certificate };
std::string to_string(LinkStatus s);

struct LinkVerdict {
  ImmersionEdge edge;
  double w_inner = 0.0;
  double w_outer = 0.0;
  LinkStatus status = LinkStatus::skipped_no_certificate;
  /// Why the link was skipped or failed.
  std::string reason;
  /// Inner trianalytic and outer certified: outer must be trianalytic too.
  bool corollary_applies = false;
  bool corollary_holds = true;
};

struct ChainReport {
  std::vector<std::string> members;
  std::vector<DegreeReport> reports;
  std::vector<LinkVerdict> links;
  bool pass = true;

  int certified_links() const;
  int skipped_links() const;
};

/// Errors identify the offending link or element.
ChainReport verify_chain(std::span<const Subvariety> chain, double tolerance = kDefaultComparisonTolerance,
                         const DegreeOptions& opts = {});

struct GeneratedChain {
  std::string family;
  std::vector<Subvariety> elements;
};

/// Deterministic per seed. Families cycle through trianalytic chains,
/// interpolating families, chains with a trianalytic inner element, generic
/// chains (whose middle link typically has no certificate) and chains whose
/// middle element is certified with scale < 1.
std::vector<GeneratedChain> generate_chain_suite(std::uint64_t seed, int count);

}  // namespace hkw
