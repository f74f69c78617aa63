#pragma once

// Flat complex subtori X = V / Lambda inside a flat hyperkahler model, and
// their Kahler and symplectic degrees.
//
// For an I-complex subspace V of complex dimension d (d even) with a
// g-orthonormal, I-oriented frame Q:
//   deg_omega X = d! Pf(Q^T omega_I Q) Vol(X)          (= d! Vol(X))
//   deg_Omega X = binom(d, d/2) * int_X (Omega ^ conj(Omega) / 4)^{d/2}
//               = d! Pf(Q^T omega_J Q) Vol(X)
//   W(X)        = (|deg_Omega X| / deg_omega X)^{1/d}  in [0, 1]

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "hkw/hk_linalg.hpp"

namespace hkw {

inline constexpr double kRankTolerance = 1e-10;
inline constexpr double kComplexResidualTolerance = 1e-10;
inline constexpr double kTrianalyticResidualTolerance = 1e-9;

using SpacePtr = std::shared_ptr<const QuaternionicSpace>;

/// I-complex linear subspace V with a lattice, modelling a flat complex subtorus.
class Subvariety {
 public:
  /// `basis` is 4n x 2d with V as its column space; `lattice` (2d x 2d)
  /// gives lattice generators as columns in the basis coordinates and
  /// defaults to the identity. Throws if the basis is rank deficient or V is
  /// not I-invariant.
  static Subvariety make(SpacePtr space, Matrix basis, std::optional<Matrix> lattice = std::nullopt,
                         std::string name = "X");

  const QuaternionicSpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  const Matrix& basis() const { return basis_; }
  const Matrix& lattice() const { return lattice_; }
  const std::string& name() const { return name_; }
  int real_dim() const { return static_cast<int>(basis_.cols()); }
  int complex_dim() const { return real_dim() / 2; }

  Subvariety with_lattice(Matrix lattice) const;
  Subvariety with_name(std::string name) const;
  /// The same subspace inside another structure on the same R^{4n}.
  Subvariety in_space(SpacePtr space) const;

 private:
  Subvariety(SpacePtr space, Matrix basis, Matrix lattice, std::string name)
      : space_(std::move(space)), basis_(std::move(basis)), lattice_(std::move(lattice)), name_(std::move(name)) {}

  SpacePtr space_;
  Matrix basis_;
  Matrix lattice_;
  std::string name_;
};

/// g-orthonormal basis of V carrying the canonical orientation: the one in
/// which Pf(Q^T omega_I Q) > 0.
Matrix orthonormal_frame(const Subvariety& x);

/// g-orthonormal frame (u_1, I u_1, ..., u_d, I u_d).
Matrix unitary_frame(const Subvariety& x);

/// Residual of I V = V measured in an orthonormal frame.
double complex_residual(const QuaternionicSpace& space, const Matrix& basis);
/// Residual of L V = V for an arbitrary endomorphism L.
double invariance_residual(const QuaternionicSpace& space, const Matrix& basis, const Matrix& l);

enum class Frame { orthonormal, raw };

/// Q^T A Q (orthonormal) or B^T A B (raw basis).
SkewMatrix restrict_form(const TwoForm& form, const Subvariety& x, Frame frame = Frame::orthonormal);

/// Restriction of Omega to V as a complex d x d skew matrix, in the complex
/// frame (u_1, ..., u_d) taken from unitary_frame.
ComplexMatrix restricted_complex_form(const ComplexTwoForm& omega, const Subvariety& x);

/// sqrt(det(Lambda^T B^T g B Lambda)).
double volume(const Subvariety& x);

enum class DegreeStrategy { pfaffian_omega_j, complex_pfaffian, oracle };

std::string to_string(DegreeStrategy s);
std::optional<DegreeStrategy> parse_strategy(const std::string& text);

using PfaffianKernel = double (*)(const SkewMatrix&);

struct DegreeOptions {
  DegreeStrategy strategy = DegreeStrategy::pfaffian_omega_j;
  PfaffianKernel pfaffian = &hkw::pfaffian;
};

/// d! Pf(restricted omega_I) Vol(X). Odd d is rejected.
double deg_omega(const Subvariety& x, const DegreeOptions& opts = {});

/// Degree of X with respect to an arbitrary constant 2-form.
double form_degree(const TwoForm& form, const Subvariety& x, const DegreeOptions& opts = {});

double deg_Omega(const Subvariety& x, const DegreeOptions& opts = {});

struct DegreeReport {
  std::string name;
  int d = 0;
  double volume = 0.0;
  double deg_omega = 0.0;
  double deg_Omega = 0.0;
  double deg_omega_J = 0.0;
  double deg_omega_K = 0.0;
  double wirtinger = 0.0;
  bool trianalytic = false;
};

DegreeReport wirtinger_number(const Subvariety& x, const DegreeOptions& opts = {});

/// Subspace is invariant under J (and hence under every induced structure).
bool is_trianalytic(const Subvariety& x);

/// Reports for many subvarieties, computed concurrently, in input order.
std::vector<DegreeReport> wirtinger_numbers(std::span<const Subvariety> xs, const DegreeOptions& opts = {});

// ---------------------------------------------------------------------------
// Constructions

/// Span of v_1, I v_1, ..., v_d, I v_d, g-orthonormalized.
Subvariety complex_span(SpacePtr space, const Matrix& vectors, std::string name = "X");
/// Span of v, Iv, Jv, Kv for every column v, g-orthonormalized.
Subvariety quaternionic_span(SpacePtr space, const Matrix& vectors, std::string name = "X");

/// Random I-complex subvariety of complex dimension d: complex span of d
/// Gaussian vectors.
Subvariety random_complex_subvariety(SpacePtr space, int d, std::mt19937_64& rng, std::string name = "X");
/// Random quaternionic subspace of quaternionic dimension m (complex dimension 2m).
Subvariety random_quaternionic_subvariety(SpacePtr space, int m, std::mt19937_64& rng, std::string name = "X");

/// Ambient vector of quaternionic coordinate `coord` and real unit `unit`
/// (0 = 1, 1 = i, 2 = j, 3 = k) in the standard basis.
Vector unit_vector(int n, int coord, int unit);

/// V_theta = span{e, I e, u, I u} with e = (1, 0), u = cos(theta) (j, 0) +
/// sin(theta) (0, 1), placed on quaternionic coordinates (first, second).
/// W(V_theta) = cos(theta) in the standard structure.
Subvariety interpolating_subvariety(SpacePtr space, double theta, int first = 0, int second = 1,
                                    std::string name = "V");

Matrix random_gaussian(int rows, int cols, std::mt19937_64& rng);

}  // namespace hkw
