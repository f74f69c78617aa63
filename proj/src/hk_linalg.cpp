#include "hkw/hk_linalg.hpp"

#include <cmath>

namespace hkw {

namespace {

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

// Left multiplication by i, j, k on one quaternionic coordinate, basis (1, i, j, k).
Matrix left_mult_block(char unit) {
  Matrix m = Matrix::Zero(4, 4);
  // Column c holds the image of basis vector c.
  switch (unit) {
    case 'i':  // i*1 = i, i*i = -1, i*j = k, i*k = -j
      m(1, 0) = 1;
      m(0, 1) = -1;
      m(3, 2) = 1;
      m(2, 3) = -1;
      break;
    case 'j':  // j*1 = j, j*i = -k, j*j = -1, j*k = i
      m(2, 0) = 1;
      m(3, 1) = -1;
      m(0, 2) = -1;
      m(1, 3) = 1;
      break;
    case 'k':  // k*1 = k, k*i = j, k*j = -i, k*k = -1
      m(3, 0) = 1;
      m(2, 1) = 1;
      m(1, 2) = -1;
      m(0, 3) = -1;
      break;
    default:
      break;
  }
  return m;
}

Matrix block_diagonal(const Matrix& block, int copies) {
  const auto b = block.rows();
  Matrix out = Matrix::Zero(b * copies, b * copies);
  for (int c = 0; c < copies; ++c) out.block(c * b, c * b, b, b) = block;
  return out;
}

}  // namespace

std::optional<StructureFailure> check_quaternionic(const Matrix& i, const Matrix& j, const Matrix& k,
                                                   const Matrix& g, double tol) {
  const auto m = g.rows();
  for (const Matrix* x : {&i, &j, &k, &g}) {
    if (x->rows() != m || x->cols() != m) throw DimensionError("structure matrices must share one square shape");
  }
  if (m == 0 || m % 4 != 0) {
    throw DimensionError("quaternionic space needs real dimension divisible by 4, got " + std::to_string(m));
  }
  const Matrix id = Matrix::Identity(m, m);
  const double g_scale = std::max(max_abs(g), 1e-300);

  if (double r = max_abs(g - g.transpose()); r > tol * g_scale) return StructureFailure{"g = g^T", r};
  if (Eigen::LLT<Matrix> llt(g); llt.info() != Eigen::Success) {
    return StructureFailure{"g positive definite", 0.0};
  }
  const std::pair<const char*, const Matrix*> units[] = {{"I", &i}, {"J", &j}, {"K", &k}};
  for (const auto& [name, x] : units) {
    if (double r = max_abs((*x) * (*x) + id); r > tol) {
      return StructureFailure{std::string(name) + "^2 = -Id", r};
    }
  }
  if (double r = max_abs(i * j - k); r > tol) return StructureFailure{"IJ = K", r};
  if (double r = max_abs(j * i + k); r > tol) return StructureFailure{"JI = -K", r};
  for (const auto& [name, x] : units) {
    if (double r = max_abs(x->transpose() * g * (*x) - g); r > tol * g_scale) {
      return StructureFailure{std::string(name) + "^T g " + name + " = g", r};
    }
  }
  return std::nullopt;
}

QuaternionicSpace QuaternionicSpace::make(Matrix i, Matrix j, Matrix k, Matrix g, double tol) {
  if (auto failure = check_quaternionic(i, j, k, g, tol)) {
    throw StructureError("not a quaternionic-Hermitian structure: " + failure->identity + " violated (residual " +
                         std::to_string(failure->residual) + ")");
  }
  return QuaternionicSpace(std::move(i), std::move(j), std::move(k), std::move(g));
}

ComplexTwoForm ComplexTwoForm::conjugate() const { return {re, {-im.matrix, im.label}}; }

ComplexTwoForm ComplexTwoForm::scaled(std::complex<double> c) const {
  const double a = c.real();
  const double b = c.imag();
  return {{re.matrix * a + (-im.matrix) * b, FormLabel::other}, {re.matrix * b + im.matrix * a, FormLabel::other}};
}

std::complex<double> ComplexTwoForm::evaluate(const Vector& x, const Vector& y) const {
  return {re.matrix.evaluate(x, y), im.matrix.evaluate(x, y)};
}

ComplexMatrix ComplexTwoForm::complex_matrix() const {
  ComplexMatrix out(dim(), dim());
  out.real() = re.matrix.entries();
  out.imag() = im.matrix.entries();
  return out;
}

QuaternionicSpace standard_space(int n) {
  if (n < 1) throw DimensionError("standard_space: quaternionic dimension must be positive");
  return QuaternionicSpace::make(block_diagonal(left_mult_block('i'), n), block_diagonal(left_mult_block('j'), n),
                                 block_diagonal(left_mult_block('k'), n), Matrix::Identity(4 * n, 4 * n),
                                 kConstructedTolerance);
}

InducedStructure induced_structure(const QuaternionicSpace& space, const std::array<double, 3>& coeffs) {
  const double norm = std::sqrt(coeffs[0] * coeffs[0] + coeffs[1] * coeffs[1] + coeffs[2] * coeffs[2]);
  if (!(norm > 0.0)) throw StructureError("induced_structure: coefficient vector must be nonzero");
  InducedStructure out;
  for (int c = 0; c < 3; ++c) out.coeffs[c] = coeffs[c] / norm;
  out.L = out.coeffs[0] * space.I() + out.coeffs[1] * space.J() + out.coeffs[2] * space.K();
  const Matrix id = Matrix::Identity(space.real_dim(), space.real_dim());
  if (double r = max_abs(out.L * out.L + id); r > 1e-10) {
    throw StructureError("induced_structure: L^2 = -Id violated (residual " + std::to_string(r) + ")");
  }
  return out;
}

TwoForm kahler_form(const QuaternionicSpace& space, const InducedStructure& l) {
  return {SkewMatrix(space.g() * l.L), FormLabel::other};
}

TwoForm kahler_form(const QuaternionicSpace& space, FormLabel which) {
  switch (which) {
    case FormLabel::omega_I:
      return {SkewMatrix(space.g() * space.I()), which};
    case FormLabel::omega_J:
      return {SkewMatrix(space.g() * space.J()), which};
    case FormLabel::omega_K:
      return {SkewMatrix(space.g() * space.K()), which};
    case FormLabel::other:
      break;
  }
  throw Error("kahler_form: label must name one of I, J, K");
}

ComplexTwoForm holomorphic_symplectic_form(const QuaternionicSpace& space) {
  return {kahler_form(space, FormLabel::omega_J), kahler_form(space, FormLabel::omega_K)};
}

QuaternionicSpace rotate_structure(const QuaternionicSpace& space, std::complex<double> lambda) {
  if (std::abs(std::abs(lambda) - 1.0) > 1e-10) {
    throw StructureError("rotate_structure: |lambda| = " + std::to_string(std::abs(lambda)) + " is not 1");
  }
  const double a = lambda.real();
  const double b = lambda.imag();
  return QuaternionicSpace::make(space.I(), a * space.J() + b * space.K(), -b * space.J() + a * space.K(), space.g(),
                                 kSuppliedTolerance);
}

Recovery recover_structure(const Matrix& g, const ComplexTwoForm& omega, const Matrix& i, double tol) {
  if (g.rows() != omega.dim() || i.rows() != omega.dim()) {
    throw DimensionError("recover_structure: metric, form and structure dimensions differ");
  }
  Eigen::LLT<Matrix> llt(g);
  if (llt.info() != Eigen::Success) return StructureFailure{"g positive definite", 0.0};
  Matrix j = llt.solve(omega.re.matrix.entries());
  Matrix k = llt.solve(omega.im.matrix.entries());
  if (auto failure = check_quaternionic(i, j, k, g, tol)) return *failure;
  return QuaternionicSpace::make(i, std::move(j), std::move(k), g, tol);
}

}  // namespace hkw
