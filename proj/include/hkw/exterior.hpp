#pragma once

// Constant forms on R^m: skew matrices, a sparse exterior algebra used as
// a brute-force reference, and Pfaffians.
//
// A constant 2-form eta with eta(x, y) = x^T A y corresponds to the
// bivector sum_{i<j} A[i][j] e_i ^ e_j. On R^{2d},
//   eta^d = d! * Pf(A) * e_1 ^ ... ^ e_{2d}.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "hkw/error.hpp"

namespace hkw {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;

/// Largest dimension accepted by pfaffian_oracle.
inline constexpr int kPfaffianOracleCutoff = 12;
/// Largest ambient dimension for which full wedge expansions are used as oracles.
inline constexpr int kWedgeOracleCutoff = 10;

/// Entries are rejected when ||A + A^T||_max exceeds this fraction of ||A||_max.
inline constexpr double kSkewRejectThreshold = 1e-8;

/// Real skew-symmetric matrix. Construction symmetrizes A <- (A - A^T) / 2.
class SkewMatrix {
 public:
  SkewMatrix() = default;
  explicit SkewMatrix(const Matrix& entries);

  static SkewMatrix zero(int dim);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Matrix& entries() const { return entries_; }
  double operator()(int i, int j) const { return entries_(i, j); }

  double evaluate(const Vector& x, const Vector& y) const;

  /// B^T A B, the pullback along the linear map B.
  SkewMatrix pullback(const Matrix& b) const;

  SkewMatrix operator*(double s) const;
  SkewMatrix operator+(const SkewMatrix& other) const;
  SkewMatrix operator-() const;

 private:
  Matrix entries_;
};

/// Element of the real exterior algebra of R^m, m <= 64.
///
/// Blades are stored as bit masks, which is the same thing as a strictly
/// increasing index tuple. Exact zeros are never stored.
class Multivector {
 public:
  using Blade = std::uint64_t;

  explicit Multivector(int dim);

  static Multivector scalar(int dim, double value);
  static Multivector basis_vector(int dim, int index);
  static Multivector from_two_form(const SkewMatrix& a);

  int dim() const { return dim_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<Blade, double>& terms() const { return terms_; }

  /// Coefficient of e_{i_1} ^ ... ^ e_{i_k}; indices may be given in any
  /// order, the permutation sign is applied.
  double coefficient(std::span<const int> indices) const;
  double coefficient(std::initializer_list<int> indices) const;
  /// Coefficient of e_0 ^ ... ^ e_{m-1}.
  double top_coefficient() const;

  /// Adds c * e_{i_1} ^ ... ^ e_{i_k}, normalizing to increasing order.
  void add_term(std::span<const int> indices, double c);
  void add_term(std::initializer_list<int> indices, double c);

  /// Index tuples and coefficients in blade order.
  std::vector<std::pair<std::vector<int>, double>> expanded_terms() const;

  Multivector grade_part(int grade) const;
  double max_abs_coefficient() const;
  bool approx_equal(const Multivector& other, double tol) const;

  Multivector& operator+=(const Multivector& other);
  Multivector& operator-=(const Multivector& other);
  Multivector& operator*=(double s);
  friend Multivector operator+(Multivector a, const Multivector& b) { return a += b; }
  friend Multivector operator-(Multivector a, const Multivector& b) { return a -= b; }
  friend Multivector operator*(Multivector a, double s) { return a *= s; }
  friend Multivector operator*(double s, Multivector a) { return a *= s; }

  friend bool operator==(const Multivector&, const Multivector&) = default;

 private:
  void accumulate(Blade blade, double c);

  int dim_ = 0;
  std::map<Blade, double> terms_;

  friend Multivector wedge(const Multivector& a, const Multivector& b);
};

Multivector wedge(const Multivector& a, const Multivector& b);

/// (sum_{i<j} A[i][j] e_i ^ e_j)^k by repeated wedging.
Multivector form_power(const SkewMatrix& a, int k);

/// Pfaffian by recursive expansion along the first row. Exponential cost.
double pfaffian_oracle(const SkewMatrix& a);

/// Pfaffian by skew-symmetric reduction to tridiagonal form with partial pivoting.
double pfaffian(const SkewMatrix& a);

/// Pfaffian of a complex skew-symmetric matrix (same elimination).
std::complex<double> pfaffian(const ComplexMatrix& a);

/// c with eta^d = c * e_1 ^ ... ^ e_{2d}; requires a.dim() == 2d.
double top_coefficient(const SkewMatrix& a, int d);

double factorial(int k);
double binomial(int n, int k);

namespace detail {

// Parlett-Reid style elimination. With track_pivot_sign == false the row and
// column swaps stop flipping the sign; that variant only exists so the
// property harness can demonstrate that it catches a sign bug.
template <class Scalar>
Scalar skew_elimination_pfaffian(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a,
                                 bool track_pivot_sign) {
  const Eigen::Index n = a.rows();
  if (n % 2 != 0) throw DimensionError("pfaffian: odd dimension " + std::to_string(n));
  Scalar result(1.0);
  for (Eigen::Index k = 0; k + 1 < n; k += 2) {
    Eigen::Index pivot = k + 1;
    double best = std::abs(a(k + 1, k));
    for (Eigen::Index i = k + 2; i < n; ++i) {
      if (std::abs(a(i, k)) > best) {
        best = std::abs(a(i, k));
        pivot = i;
      }
    }
    if (pivot != k + 1) {
      a.row(k + 1).swap(a.row(pivot));
      a.col(k + 1).swap(a.col(pivot));
      if (track_pivot_sign) result = -result;
    }
    if (a(k + 1, k) == Scalar(0.0)) return Scalar(0.0);
    result *= a(k, k + 1);
    const Eigen::Index rest = n - k - 2;
    if (rest > 0) {
      // Eliminate row/column k beyond the superdiagonal using row/column k+1.
      Eigen::Matrix<Scalar, Eigen::Dynamic, 1> tau = a.row(k).tail(rest).transpose() / a(k, k + 1);
      Eigen::Matrix<Scalar, Eigen::Dynamic, 1> col = a.col(k + 1).tail(rest);
      a.bottomRightCorner(rest, rest) += tau * col.transpose() - col * tau.transpose();
    }
  }
  return result;
}

}  // namespace detail

}  // namespace hkw
