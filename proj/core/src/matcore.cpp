#include "covlab/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace covlab {

SymMatrix::SymMatrix(Matrix entries) {
  if (entries.rows() < 1 || entries.rows() != entries.cols()) {
    throw DomainError("SymMatrix: input must be square with dim >= 1");
  }
  if (!entries.allFinite()) {
    throw DomainError("SymMatrix: non-finite entries");
  }
  entries_ = 0.5 * (entries + entries.transpose()).eval();
}

SymMatrix SymMatrix::identity(int dim) {
  return SymMatrix(Matrix::Identity(dim, dim));
}

SymMatrix SymMatrix::from_diagonal(const Vector& diag) {
  return SymMatrix(Matrix(diag.asDiagonal()));
}

OrthMatrix::OrthMatrix(Matrix entries) {
  if (entries.rows() < 1 || entries.rows() != entries.cols()) {
    throw DomainError("OrthMatrix: input must be square with dim >= 1");
  }
  const int d = static_cast<int>(entries.rows());
  const double defect = (entries.transpose() * entries - Matrix::Identity(d, d)).norm();
  if (!(defect <= 1e-10 * d)) {
    throw DomainError("OrthMatrix: orthogonality defect " + std::to_string(defect));
  }
  entries_ = std::move(entries);
}

Spectrum::Spectrum(std::vector<double> values) {
  if (values.empty()) throw DomainError("Spectrum: empty");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]) || values[i] < 0.0) {
      throw DomainError("Spectrum: entries must be finite and nonnegative");
    }
    if (i > 0 && values[i] > values[i - 1]) {
      throw DomainError("Spectrum: entries must be nonincreasing");
    }
  }
  if (!(values.front() > 0.0)) {
    throw DomainError("Spectrum: zero matrix has no effective rank");
  }
  values_ = std::move(values);
}

double Spectrum::trace() const {
  double sum = 0.0;
  for (double v : values_) sum += v;
  return sum;
}

double Spectrum::trace_power(int k) const {
  if (k < 1) throw DomainError("trace_power: k must be >= 1");
  double sum = 0.0;
  for (double v : values_) sum += std::pow(v, k);
  return sum;
}

double trace_power(const SymMatrix& a, int k) {
  if (k < 1) throw DomainError("trace_power: k must be >= 1");
  if (k == 1) return a.trace();
  Matrix power = a.entries();
  for (int i = 2; i <= k; ++i) power = (power * a.entries()).eval();
  return power.trace();
}

double trace_power(const Spectrum& s, int k) { return s.trace_power(k); }

double operator_norm(const SymMatrix& a, double tol) {
  if (!(tol > 0.0)) throw DomainError("operator_norm: tol must be positive");
  const int d = a.dim();
  const Matrix& m = a.entries();

  if (m.isDiagonal(0.0)) {
    return m.diagonal().cwiseAbs().maxCoeff();
  }

  const long cap = static_cast<long>(10.0 * d * std::log(static_cast<double>(d))) + 1000;
  // Deterministic pseudo-random start; orthogonal to the top eigenspace
  // only on a null set.
  RandomStream rng(0x9E3779B97F4A7C15ull ^ static_cast<std::uint64_t>(d));
  Vector v(d);
  for (int i = 0; i < d; ++i) v[i] = rng.gaussian();
  v.normalize();

  // Iterate with A^2: max|eigenvalue| of A is the square root of the top
  // eigenvalue of A^2, and squaring removes the sign ties that stall plain
  // power iteration on indefinite input.
  double rayleigh_prev = 0.0;
  for (long it = 1; it <= cap; ++it) {
    Vector w = m * (m * v);
    const double rayleigh = v.dot(w);  // = ||A v||^2 for unit v
    const double norm_w = w.norm();
    if (norm_w == 0.0) return 0.0;  // v landed in the kernel of a rank-deficient A
    v = w / norm_w;
    if (it > 1 && std::abs(rayleigh - rayleigh_prev) <= tol * std::max(rayleigh, 1e-300)) {
      return std::sqrt(rayleigh);
    }
    rayleigh_prev = rayleigh;
  }
  throw NumericError("operator_norm: power iteration did not converge", cap,
                     std::sqrt(std::max(rayleigh_prev, 0.0)));
}

double effective_rank(const SymMatrix& a, double tol) {
  if (a.is_zero()) throw DomainError("effective_rank: zero matrix");
  return a.trace() / operator_norm(a, tol);
}

double effective_rank(const Spectrum& s) { return s.trace() / s.head(); }

OrthMatrix haar_orthogonal(int dim, RandomStream& rng) {
  if (dim < 1) throw DomainError("haar_orthogonal: dim must be >= 1");
  Matrix gauss(dim, dim);
  for (int j = 0; j < dim; ++j) {
    for (int i = 0; i < dim; ++i) gauss(i, j) = rng.gaussian();
  }
  Eigen::HouseholderQR<Matrix> qr(gauss);
  Matrix q = qr.householderQ() * Matrix::Identity(dim, dim);
  const Matrix& packed = qr.matrixQR();
  // Plain QR of a Gaussian is not Haar; fixing the R diagonal to be
  // positive makes it so.
  for (int j = 0; j < dim; ++j) {
    if (packed(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return OrthMatrix(std::move(q));
}

Matrix kron(const Matrix& a, const Matrix& b) {
  const Eigen::Index rows = a.rows() * b.rows();
  const Eigen::Index cols = a.cols() * b.cols();
  if (rows > 256 || cols > 256) {
    throw SizeError("kron: product dimension above the 256 cap");
  }
  Matrix out(rows, cols);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Vector vectorize(const Matrix& a) {
  Vector out(a.size());
  Eigen::Index pos = 0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    out.segment(pos, a.rows()) = a.col(j);
    pos += a.rows();
  }
  return out;
}

SpectralFunctionals::SpectralFunctionals(const Spectrum& s)
    : op_norm(s.head()), tr(s.trace()), tr2(s.trace_power(2)), tr4(s.trace_power(4)) {}

SpectralFunctionals::SpectralFunctionals(const SymMatrix& a, double tol)
    : op_norm(operator_norm(a, tol)),
      tr(a.trace()),
      tr2(covlab::trace_power(a, 2)),
      tr4(covlab::trace_power(a, 4)) {
  if (a.is_zero()) throw DomainError("SpectralFunctionals: zero matrix");
}

}  // namespace covlab
