#pragma once

// Flat hyperkahler structures on R^{4n}.
//
// Conventions: per quaternionic coordinate the real basis is ordered
// (1, i, j, k) and I, J, K act by left multiplication by i, j, k, so that
// I J = K. Kahler forms are omega_L(x, y) = g(x, L y), with matrix g L.
// The holomorphic symplectic form is Omega = omega_J + sqrt(-1) omega_K.

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <variant>

#include "hkw/exterior.hpp"

namespace hkw {

/// Identity checks for objects built by this library.
inline constexpr double kConstructedTolerance = 1e-12;
/// Identity checks for user-supplied or recovered objects.
inline constexpr double kSuppliedTolerance = 1e-8;

/// The identity a candidate quaternionic triple fails, with its residual.
struct StructureFailure {
  std::string identity;
  double residual = 0.0;
};

/// Checks every quaternionic-Hermitian identity; returns the first violation.
std::optional<StructureFailure> check_quaternionic(const Matrix& i, const Matrix& j, const Matrix& k,
                                                   const Matrix& g, double tol);

/// R^{4n} with structure endomorphisms I, J, K and a compatible metric g.
class QuaternionicSpace {
 public:
  /// Validates all identities at `tol`; throws StructureError naming the
  /// violated identity.
  static QuaternionicSpace make(Matrix i, Matrix j, Matrix k, Matrix g, double tol = kSuppliedTolerance);

  int n() const { return static_cast<int>(g_.rows()) / 4; }
  int real_dim() const { return static_cast<int>(g_.rows()); }
  const Matrix& I() const { return i_; }
  const Matrix& J() const { return j_; }
  const Matrix& K() const { return k_; }
  const Matrix& g() const { return g_; }

  /// g(x, y).
  double inner(const Vector& x, const Vector& y) const { return x.dot(g_ * y); }

 private:
  QuaternionicSpace(Matrix i, Matrix j, Matrix k, Matrix g)
      : i_(std::move(i)), j_(std::move(j)), k_(std::move(k)), g_(std::move(g)) {}

  Matrix i_, j_, k_, g_;
};

/// L = aI + bJ + cK with a^2 + b^2 + c^2 = 1.
struct InducedStructure {
  std::array<double, 3> coeffs{};
  Matrix L;
};

enum class FormLabel { omega_I, omega_J, omega_K, other };

struct TwoForm {
  SkewMatrix matrix;
  FormLabel label = FormLabel::other;
};

/// Omega = re + sqrt(-1) im as a pair of real 2-forms.
struct ComplexTwoForm {
  TwoForm re;
  TwoForm im;

  int dim() const { return re.matrix.dim(); }
  ComplexTwoForm conjugate() const;
  /// Complex scalar multiple c * Omega.
  ComplexTwoForm scaled(std::complex<double> c) const;
  std::complex<double> evaluate(const Vector& x, const Vector& y) const;
  /// Complex skew matrix re + i im.
  ComplexMatrix complex_matrix() const;
};

/// The standard flat model H^n with g = identity.
QuaternionicSpace standard_space(int n);

InducedStructure induced_structure(const QuaternionicSpace& space, const std::array<double, 3>& coeffs);

TwoForm kahler_form(const QuaternionicSpace& space, const InducedStructure& l);
/// omega_I, omega_J or omega_K.
TwoForm kahler_form(const QuaternionicSpace& space, FormLabel which);

ComplexTwoForm holomorphic_symplectic_form(const QuaternionicSpace& space);

/// Rotates (J, K) by the unit complex number lambda = a + b sqrt(-1):
///   J' = a J + b K,  K' = -b J + a K,
/// so that Omega' = conj(lambda) Omega.
QuaternionicSpace rotate_structure(const QuaternionicSpace& space, std::complex<double> lambda);

/// J = g^{-1} Omega.re, K = g^{-1} Omega.im. A triple that is not
/// quaternionic is a regular outcome, reported as a StructureFailure.
using Recovery = std::variant<QuaternionicSpace, StructureFailure>;
Recovery recover_structure(const Matrix& g, const ComplexTwoForm& omega, const Matrix& i,
                           double tol = kSuppliedTolerance);

}  // namespace hkw
