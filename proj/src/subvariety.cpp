#include "hkw/subvariety.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

namespace hkw {

namespace {

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

// g-orthonormal basis of the column space of `basis` (Cholesky of the Gram matrix).
Matrix gram_orthonormalize(const Matrix& g, const Matrix& basis) {
  const Matrix gram = basis.transpose() * g * basis;
  Eigen::LLT<Matrix> llt(gram);
  if (llt.info() != Eigen::Success) throw DimensionError("basis is rank deficient");
  // Q = B L^{-T}
  return llt.matrixU().solve<Eigen::OnTheRight>(basis);
}

void require_even_dim(const Subvariety& x) {
  const int d = x.complex_dim();
  if (d < 1 || d % 2 != 0) {
    throw DegreeError("symplectic degree undefined for odd complex dimension (" + x.name() + " has d = " +
                      std::to_string(d) + ")");
  }
}

}  // namespace

double invariance_residual(const QuaternionicSpace& space, const Matrix& basis, const Matrix& l) {
  const Matrix q = gram_orthonormalize(space.g(), basis);
  const Matrix image = l * q;
  return max_abs(image - q * (q.transpose() * space.g() * image));
}

double complex_residual(const QuaternionicSpace& space, const Matrix& basis) {
  return invariance_residual(space, basis, space.I());
}

Subvariety Subvariety::make(SpacePtr space, Matrix basis, std::optional<Matrix> lattice, std::string name) {
  if (!space) throw Error("subvariety " + name + ": no ambient space");
  if (basis.rows() != space->real_dim()) {
    throw DimensionError("subvariety " + name + ": basis vectors have length " + std::to_string(basis.rows()) +
                         ", ambient dimension is " + std::to_string(space->real_dim()));
  }
  if (basis.cols() == 0 || basis.cols() % 2 != 0) {
    throw StructureError("subvariety " + name + ": an I-complex subspace has even positive real dimension, got " +
                         std::to_string(basis.cols()));
  }
  Eigen::JacobiSVD<Matrix> svd(basis);
  const auto& sv = svd.singularValues();
  if (!(sv(sv.size() - 1) > kRankTolerance * sv(0))) {
    throw StructureError("subvariety " + name + ": basis columns are linearly dependent");
  }
  if (double r = complex_residual(*space, basis); r > kComplexResidualTolerance) {
    throw StructureError("subvariety " + name + ": subspace is not I-complex (residual " + std::to_string(r) + ")");
  }
  Matrix lat = lattice.value_or(Matrix::Identity(basis.cols(), basis.cols()));
  if (lat.rows() != basis.cols() || lat.cols() != basis.cols()) {
    throw DimensionError("subvariety " + name + ": lattice must be " + std::to_string(basis.cols()) + "x" +
                         std::to_string(basis.cols()));
  }
  return Subvariety(std::move(space), std::move(basis), std::move(lat), std::move(name));
}

Subvariety Subvariety::with_lattice(Matrix lattice) const { return make(space_, basis_, std::move(lattice), name_); }

Subvariety Subvariety::with_name(std::string name) const {
  Subvariety out = *this;
  out.name_ = std::move(name);
  return out;
}

Subvariety Subvariety::in_space(SpacePtr space) const { return make(std::move(space), basis_, lattice_, name_); }

Matrix unitary_frame(const Subvariety& x) {
  const Matrix& g = x.space().g();
  const Matrix& i = x.space().I();
  const Matrix& b = x.basis();
  Matrix u(b.rows(), b.cols());
  int filled = 0;
  for (Eigen::Index c = 0; c < b.cols() && filled < b.cols(); ++c) {
    Vector v = b.col(c);
    const double original = std::sqrt(v.dot(g * v));
    for (int pass = 0; pass < 2; ++pass) {
      for (int k = 0; k < filled; ++k) v -= u.col(k) * u.col(k).dot(g * v);
    }
    const double norm = std::sqrt(v.dot(g * v));
    if (norm <= 1e-8 * original) continue;
    v /= norm;
    u.col(filled) = v;
    u.col(filled + 1) = i * v;
    filled += 2;
  }
  if (filled != b.cols()) throw StructureError("unitary_frame: subspace of " + x.name() + " is not I-complex");
  return u;
}

Matrix orthonormal_frame(const Subvariety& x) {
  const Matrix& g = x.space().g();
  Matrix q = gram_orthonormalize(g, x.basis());
  // (u_1, I u_1, ...) has Pf(omega_I) = (-1)^d since omega_I(u, I u) = -g(u, u).
  const Matrix u = unitary_frame(x);
  const double orientation = (u.transpose() * g * q).determinant();
  const double wanted = (x.complex_dim() % 2 == 0) ? 1.0 : -1.0;
  if (orientation * wanted < 0.0) q.col(0) = -q.col(0);
  return q;
}

SkewMatrix restrict_form(const TwoForm& form, const Subvariety& x, Frame frame) {
  if (form.matrix.dim() != x.space().real_dim()) {
    throw DimensionError("restrict_form: form of dimension " + std::to_string(form.matrix.dim()) +
                         " on ambient dimension " + std::to_string(x.space().real_dim()));
  }
  return form.matrix.pullback(frame == Frame::orthonormal ? orthonormal_frame(x) : x.basis());
}

ComplexMatrix restricted_complex_form(const ComplexTwoForm& omega, const Subvariety& x) {
  if (omega.dim() != x.space().real_dim()) throw DimensionError("restricted_complex_form: dimension mismatch");
  const Matrix u = unitary_frame(x);
  const int d = x.complex_dim();
  Matrix c(u.rows(), d);
  for (int a = 0; a < d; ++a) c.col(a) = u.col(2 * a);
  ComplexMatrix out(d, d);
  out.real() = c.transpose() * omega.re.matrix.entries() * c;
  out.imag() = c.transpose() * omega.im.matrix.entries() * c;
  return out;
}

double volume(const Subvariety& x) {
  const Matrix& lat = x.lattice();
  Eigen::JacobiSVD<Matrix> svd(lat);
  const auto& sv = svd.singularValues();
  if (!(sv(sv.size() - 1) > 1e-12 * sv(0))) throw DegreeError("volume: degenerate lattice for " + x.name());
  const Matrix gram = lat.transpose() * (x.basis().transpose() * x.space().g() * x.basis()) * lat;
  Eigen::LLT<Matrix> llt(gram);
  if (llt.info() != Eigen::Success) throw DegreeError("volume: degenerate lattice for " + x.name());
  // sqrt(det(L L^T)) = prod diag(L)
  return llt.matrixLLT().diagonal().prod();
}

std::string to_string(DegreeStrategy s) {
  switch (s) {
    case DegreeStrategy::pfaffian_omega_j:
      return "pfaffian-of-omega-j";
    case DegreeStrategy::complex_pfaffian:
      return "complex-pfaffian";
    case DegreeStrategy::oracle:
      return "oracle";
  }
  return "unknown";
}

std::optional<DegreeStrategy> parse_strategy(const std::string& text) {
  for (auto s : {DegreeStrategy::pfaffian_omega_j, DegreeStrategy::complex_pfaffian, DegreeStrategy::oracle}) {
    if (to_string(s) == text) return s;
  }
  return std::nullopt;
}

double form_degree(const TwoForm& form, const Subvariety& x, const DegreeOptions& opts) {
  require_even_dim(x);
  const SkewMatrix restricted = restrict_form(form, x, Frame::orthonormal);
  return factorial(x.complex_dim()) * opts.pfaffian(restricted) * volume(x);
}

double deg_omega(const Subvariety& x, const DegreeOptions& opts) {
  return form_degree(kahler_form(x.space(), FormLabel::omega_I), x, opts);
}

double deg_Omega(const Subvariety& x, const DegreeOptions& opts) {
  require_even_dim(x);
  const int d = x.complex_dim();
  switch (opts.strategy) {
    case DegreeStrategy::pfaffian_omega_j:
      return form_degree(kahler_form(x.space(), FormLabel::omega_J), x, opts);

    case DegreeStrategy::complex_pfaffian: {
      // Omega|_V = sum C_ab zeta_a ^ zeta_b in unitary coordinates, so
      // Omega^{d/2} ^ conj(Omega)^{d/2} = ((d/2)!)^2 |Pf C|^2 2^d vol, and the
      // top coefficient of (Omega ^ conj(Omega) / 4)^{d/2} is ((d/2)!)^2 |Pf C|^2.
      const ComplexMatrix c = restricted_complex_form(holomorphic_symplectic_form(x.space()), x);
      const double half = factorial(d / 2);
      const double top = half * half * std::norm(pfaffian(c));
      return binomial(d, d / 2) * top * volume(x);
    }

    case DegreeStrategy::oracle: {
      if (2 * d > kWedgeOracleCutoff) {
        throw DegreeError("deg_Omega: oracle strategy limited to real dimension " +
                          std::to_string(kWedgeOracleCutoff) + ", " + x.name() + " has " + std::to_string(2 * d));
      }
      const Matrix q = orthonormal_frame(x);
      const auto omega = holomorphic_symplectic_form(x.space());
      const Multivector re = Multivector::from_two_form(omega.re.matrix.pullback(q));
      const Multivector im = Multivector::from_two_form(omega.im.matrix.pullback(q));
      // (re + i im) ^ (re - i im) = re^re + im^im + i (im^re - re^im); the
      // imaginary part vanishes because 2-forms commute.
      const Multivector quarter = (wedge(re, re) + wedge(im, im)) * 0.25;
      Multivector power = Multivector::scalar(2 * d, 1.0);
      for (int k = 0; k < d / 2; ++k) power = wedge(power, quarter);
      return binomial(d, d / 2) * power.top_coefficient() * volume(x);
    }
  }
  throw Error("deg_Omega: unknown strategy");
}

bool is_trianalytic(const Subvariety& x) {
  return invariance_residual(x.space(), x.basis(), x.space().J()) <= kTrianalyticResidualTolerance;
}

DegreeReport wirtinger_number(const Subvariety& x, const DegreeOptions& opts) {
  require_even_dim(x);
  DegreeReport r;
  r.name = x.name();
  r.d = x.complex_dim();
  r.volume = volume(x);
  r.deg_omega = deg_omega(x, opts);
  r.deg_Omega = deg_Omega(x, opts);
  r.deg_omega_J = form_degree(kahler_form(x.space(), FormLabel::omega_J), x, opts);
  r.deg_omega_K = form_degree(kahler_form(x.space(), FormLabel::omega_K), x, opts);
  r.wirtinger = r.deg_omega > 0.0 ? std::pow(std::abs(r.deg_Omega) / r.deg_omega, 1.0 / r.d)
                                  : std::numeric_limits<double>::quiet_NaN();
  r.trianalytic = is_trianalytic(x);
  return r;
}

std::vector<DegreeReport> wirtinger_numbers(std::span<const Subvariety> xs, const DegreeOptions& opts) {
  std::vector<DegreeReport> out(xs.size());
  std::vector<std::exception_ptr> errors(xs.size());
  const std::size_t workers =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(xs.size(), 1));
  auto run = [&](std::size_t w) {
    for (std::size_t k = w; k < xs.size(); k += workers) {
      try {
        out[k] = wirtinger_number(xs[k], opts);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Constructions

Subvariety complex_span(SpacePtr space, const Matrix& vectors, std::string name) {
  Matrix basis(vectors.rows(), 2 * vectors.cols());
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    basis.col(2 * c) = vectors.col(c);
    basis.col(2 * c + 1) = space->I() * vectors.col(c);
  }
  Matrix q = gram_orthonormalize(space->g(), basis);
  return Subvariety::make(std::move(space), std::move(q), std::nullopt, std::move(name));
}

Subvariety quaternionic_span(SpacePtr space, const Matrix& vectors, std::string name) {
  Matrix basis(vectors.rows(), 4 * vectors.cols());
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    basis.col(4 * c) = vectors.col(c);
    basis.col(4 * c + 1) = space->I() * vectors.col(c);
    basis.col(4 * c + 2) = space->J() * vectors.col(c);
    basis.col(4 * c + 3) = space->K() * vectors.col(c);
  }
  Matrix q = gram_orthonormalize(space->g(), basis);
  return Subvariety::make(std::move(space), std::move(q), std::nullopt, std::move(name));
}

Matrix random_gaussian(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (int c = 0; c < cols; ++c) {
    for (int r = 0; r < rows; ++r) m(r, c) = normal(rng);
  }
  return m;
}

Subvariety random_complex_subvariety(SpacePtr space, int d, std::mt19937_64& rng, std::string name) {
  const int m = space->real_dim();
  if (d < 1 || 2 * d > m) throw DimensionError("random_complex_subvariety: complex dimension out of range");
  // Draw the full 4n x 2d Gaussian block and keep its first d columns.
  const Matrix draw = random_gaussian(m, 2 * d, rng);
  return complex_span(std::move(space), draw.leftCols(d), std::move(name));
}

Subvariety random_quaternionic_subvariety(SpacePtr space, int m, std::mt19937_64& rng, std::string name) {
  if (m < 1 || m > space->n()) throw DimensionError("random_quaternionic_subvariety: dimension out of range");
  return quaternionic_span(space, random_gaussian(space->real_dim(), m, rng), std::move(name));
}

Vector unit_vector(int n, int coord, int unit) {
  if (coord < 0 || coord >= n || unit < 0 || unit > 3) throw DimensionError("unit_vector: index out of range");
  Vector v = Vector::Zero(4 * n);
  v(4 * coord + unit) = 1.0;
  return v;
}

Subvariety interpolating_subvariety(SpacePtr space, double theta, int first, int second, std::string name) {
  const int n = space->n();
  const Vector e = unit_vector(n, first, 0);
  const Vector u = std::cos(theta) * unit_vector(n, first, 2) + std::sin(theta) * unit_vector(n, second, 0);
  Matrix basis(4 * n, 4);
  basis.col(0) = e;
  basis.col(1) = space->I() * e;
  basis.col(2) = u;
  basis.col(3) = space->I() * u;
  return Subvariety::make(std::move(space), std::move(basis), std::nullopt, std::move(name));
}

}  // namespace hkw
