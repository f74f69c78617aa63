#include "hkw/exterior.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace hkw {

namespace {

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

// Sign of moving the blade b past the blade a: (-1)^{#(i in a, j in b, i > j)}.
double reorder_sign(Multivector::Blade a, Multivector::Blade b) {
  int swaps = 0;
  while (b != 0) {
    const int j = std::countr_zero(b);
    b &= b - 1;
    swaps += std::popcount(a >> (j + 1));
  }
  return (swaps % 2 == 0) ? 1.0 : -1.0;
}

// Sort indices in place by insertion sort, returning the permutation sign;
// returns 0 if an index repeats.
double sort_with_sign(std::vector<int>& idx) {
  double sign = 1.0;
  for (std::size_t i = 1; i < idx.size(); ++i) {
    for (std::size_t j = i; j > 0 && idx[j - 1] >= idx[j]; --j) {
      if (idx[j - 1] == idx[j]) return 0.0;
      std::swap(idx[j - 1], idx[j]);
      sign = -sign;
    }
  }
  for (std::size_t i = 1; i < idx.size(); ++i) {
    if (idx[i - 1] == idx[i]) return 0.0;
  }
  return sign;
}

double pfaffian_expand(const Matrix& a, std::vector<int>& rows) {
  if (rows.empty()) return 1.0;
  const int first = rows.front();
  double total = 0.0;
  for (std::size_t j = 1; j < rows.size(); ++j) {
    const double entry = a(first, rows[j]);
    if (entry == 0.0) continue;
    std::vector<int> rest;
    rest.reserve(rows.size() - 2);
    for (std::size_t k = 1; k < rows.size(); ++k) {
      if (k != j) rest.push_back(rows[k]);
    }
    const double sign = (j % 2 == 1) ? 1.0 : -1.0;
    total += sign * entry * pfaffian_expand(a, rest);
  }
  return total;
}

}  // namespace

// ---------------------------------------------------------------------------
// SkewMatrix

SkewMatrix::SkewMatrix(const Matrix& entries) {
  if (entries.rows() != entries.cols()) {
    throw DimensionError("skew matrix must be square, got " + std::to_string(entries.rows()) + "x" +
                         std::to_string(entries.cols()));
  }
  const double scale = max_abs(entries);
  const double asym = max_abs(entries + entries.transpose());
  if (asym > kSkewRejectThreshold * scale) {
    throw StructureError("matrix is not skew-symmetric: ||A + A^T|| = " + std::to_string(asym));
  }
  entries_ = (entries - entries.transpose()) / 2.0;
}

SkewMatrix SkewMatrix::zero(int dim) { return SkewMatrix(Matrix::Zero(dim, dim)); }

double SkewMatrix::evaluate(const Vector& x, const Vector& y) const { return x.dot(entries_ * y); }

SkewMatrix SkewMatrix::pullback(const Matrix& b) const {
  if (b.rows() != dim()) throw DimensionError("pullback: map does not land in the form's space");
  return SkewMatrix(b.transpose() * entries_ * b);
}

SkewMatrix SkewMatrix::operator*(double s) const { return SkewMatrix(entries_ * s); }

SkewMatrix SkewMatrix::operator+(const SkewMatrix& other) const {
  if (other.dim() != dim()) throw DimensionError("skew matrix sum: dimension mismatch");
  return SkewMatrix(entries_ + other.entries_);
}

SkewMatrix SkewMatrix::operator-() const { return SkewMatrix(-entries_); }

// ---------------------------------------------------------------------------
// Multivector

Multivector::Multivector(int dim) : dim_(dim) {
  if (dim < 0 || dim > 64) throw DimensionError("multivector dimension must be in [0, 64]");
}

Multivector Multivector::scalar(int dim, double value) {
  Multivector m(dim);
  m.accumulate(0, value);
  return m;
}

Multivector Multivector::basis_vector(int dim, int index) {
  if (index < 0 || index >= dim) throw DimensionError("basis vector index out of range");
  Multivector m(dim);
  m.accumulate(Blade{1} << index, 1.0);
  return m;
}

Multivector Multivector::from_two_form(const SkewMatrix& a) {
  Multivector m(a.dim());
  for (int i = 0; i < a.dim(); ++i) {
    for (int j = i + 1; j < a.dim(); ++j) {
      m.accumulate((Blade{1} << i) | (Blade{1} << j), a(i, j));
    }
  }
  return m;
}

void Multivector::accumulate(Blade blade, double c) {
  if (c == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(blade, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

double Multivector::coefficient(std::span<const int> indices) const {
  std::vector<int> idx(indices.begin(), indices.end());
  for (int i : idx) {
    if (i < 0 || i >= dim_) throw DimensionError("multivector index out of range");
  }
  const double sign = sort_with_sign(idx);
  if (sign == 0.0) return 0.0;
  Blade blade = 0;
  for (int i : idx) blade |= Blade{1} << i;
  auto it = terms_.find(blade);
  return it == terms_.end() ? 0.0 : sign * it->second;
}

double Multivector::coefficient(std::initializer_list<int> indices) const {
  return coefficient(std::span<const int>(indices.begin(), indices.size()));
}

double Multivector::top_coefficient() const {
  const Blade full = dim_ == 64 ? ~Blade{0} : (Blade{1} << dim_) - 1;
  auto it = terms_.find(full);
  return it == terms_.end() ? 0.0 : it->second;
}

void Multivector::add_term(std::span<const int> indices, double c) {
  std::vector<int> idx(indices.begin(), indices.end());
  for (int i : idx) {
    if (i < 0 || i >= dim_) throw DimensionError("multivector index out of range");
  }
  const double sign = sort_with_sign(idx);
  if (sign == 0.0) return;
  Blade blade = 0;
  for (int i : idx) blade |= Blade{1} << i;
  accumulate(blade, sign * c);
}

void Multivector::add_term(std::initializer_list<int> indices, double c) {
  add_term(std::span<const int>(indices.begin(), indices.size()), c);
}

std::vector<std::pair<std::vector<int>, double>> Multivector::expanded_terms() const {
  std::vector<std::pair<std::vector<int>, double>> out;
  out.reserve(terms_.size());
  for (const auto& [blade, c] : terms_) {
    std::vector<int> idx;
    for (Blade b = blade; b != 0; b &= b - 1) idx.push_back(std::countr_zero(b));
    out.emplace_back(std::move(idx), c);
  }
  return out;
}

Multivector Multivector::grade_part(int grade) const {
  Multivector out(dim_);
  for (const auto& [blade, c] : terms_) {
    if (std::popcount(blade) == grade) out.terms_.emplace(blade, c);
  }
  return out;
}

double Multivector::max_abs_coefficient() const {
  double m = 0.0;
  for (const auto& [blade, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

bool Multivector::approx_equal(const Multivector& other, double tol) const {
  if (dim_ != other.dim_) return false;
  return (*this - other).max_abs_coefficient() <= tol;
}

Multivector& Multivector::operator+=(const Multivector& other) {
  if (other.dim_ != dim_) throw DimensionError("multivector sum: dimension mismatch");
  for (const auto& [blade, c] : other.terms_) accumulate(blade, c);
  return *this;
}

Multivector& Multivector::operator-=(const Multivector& other) {
  if (other.dim_ != dim_) throw DimensionError("multivector difference: dimension mismatch");
  for (const auto& [blade, c] : other.terms_) accumulate(blade, -c);
  return *this;
}

Multivector& Multivector::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [blade, c] : terms_) c *= s;
  return *this;
}

Multivector wedge(const Multivector& a, const Multivector& b) {
  if (a.dim() != b.dim()) {
    throw DimensionError("wedge: dimension mismatch (" + std::to_string(a.dim()) + " vs " +
                         std::to_string(b.dim()) + ")");
  }
  Multivector out(a.dim());
  for (const auto& [ba, ca] : a.terms_) {
    for (const auto& [bb, cb] : b.terms_) {
      if ((ba & bb) != 0) continue;
      out.accumulate(ba | bb, reorder_sign(ba, bb) * ca * cb);
    }
  }
  return out;
}

Multivector form_power(const SkewMatrix& a, int k) {
  if (k < 0) throw DimensionError("form_power: negative exponent");
  const Multivector eta = Multivector::from_two_form(a);
  Multivector out = Multivector::scalar(a.dim(), 1.0);
  for (int i = 0; i < k; ++i) out = wedge(out, eta);
  return out;
}

// ---------------------------------------------------------------------------
// Pfaffians

double pfaffian_oracle(const SkewMatrix& a) {
  if (a.dim() % 2 != 0) throw DimensionError("pfaffian_oracle: odd dimension " + std::to_string(a.dim()));
  if (a.dim() > kPfaffianOracleCutoff) {
    throw DimensionError("pfaffian_oracle: dimension " + std::to_string(a.dim()) + " above cutoff " +
                         std::to_string(kPfaffianOracleCutoff));
  }
  std::vector<int> rows(a.dim());
  for (int i = 0; i < a.dim(); ++i) rows[i] = i;
  return pfaffian_expand(a.entries(), rows);
}

double pfaffian(const SkewMatrix& a) { return detail::skew_elimination_pfaffian<double>(a.entries(), true); }

std::complex<double> pfaffian(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("complex pfaffian: matrix must be square");
  const double scale = a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
  const double asym = a.size() == 0 ? 0.0 : (a + a.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSkewRejectThreshold * scale) throw StructureError("complex matrix is not skew-symmetric");
  return detail::skew_elimination_pfaffian<std::complex<double>>((a - a.transpose()) / 2.0, true);
}

double top_coefficient(const SkewMatrix& a, int d) {
  if (d < 1 || a.dim() != 2 * d) {
    throw DimensionError("top_coefficient: form of dimension " + std::to_string(a.dim()) +
                         " has no top power of degree " + std::to_string(d));
  }
  return factorial(d) * pfaffian(a);
}

double factorial(int k) {
  double out = 1.0;
  for (int i = 2; i <= k; ++i) out *= i;
  return out;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double out = 1.0;
  for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return std::round(out);
}

}  // namespace hkw
