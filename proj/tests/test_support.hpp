#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <vector>

#include "hkw/exterior.hpp"

namespace hkw::testing {

inline double rel_err(double got, double want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline SkewMatrix random_skew(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix a = Matrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = i + 1; j < dim; ++j) {
      a(i, j) = normal(rng);
      a(j, i) = -a(i, j);
    }
  }
  return SkewMatrix(a);
}

inline Matrix random_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) m(r, c) = normal(rng);
  return m;
}

/// Pf(A) = 1 / (2^m m!) * sum_{sigma in S_2m} sgn(sigma) prod a_{sigma(2i-1) sigma(2i)},
/// summed over every permutation. Only for dim <= 8.
inline double pfaffian_by_permutations(const Matrix& a) {
  const int n = static_cast<int>(a.rows());
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double total = 0.0;
  do {
    int inversions = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) inversions += perm[i] > perm[j];
    double term = (inversions % 2 == 0) ? 1.0 : -1.0;
    for (int i = 0; i < n; i += 2) term *= a(perm[i], perm[i + 1]);
    total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  double norm = 1.0;
  for (int i = 1; i <= n / 2; ++i) norm *= 2.0 * i;
  return total / norm;
}


/// Type (k,k) part of eta^{2k}-style forms: a (p,q)-form pulls back along
/// R_t = cos t + sin t I to e^{i(p-q)t} times itself, so averaging the
/// pullbacks of omega^2 over eight equally spaced t keeps exactly the (2,2)
/// part (p - q ranges over -4..4).
inline Multivector balanced_part_of_square(const SkewMatrix& omega, const Matrix& complex_structure) {
  const int m = omega.dim();
  Multivector sum(m);
  const int samples = 8;
  for (int s = 0; s < samples; ++s) {
    const double t = 2.0 * std::numbers::pi * s / samples;
    const Matrix rot = std::cos(t) * Matrix::Identity(m, m) + std::sin(t) * complex_structure;
    sum += form_power(omega.pullback(rot), 2);
  }
  return sum * (1.0 / samples);
}

}  // namespace hkw::testing
