#pragma once

#include <Eigen/Dense>
#include <vector>

#include "covlab/error.hpp"
#include "covlab/rng.hpp"

namespace covlab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Dense real symmetric matrix. Construction symmetrizes (A + A^T)/2, so
/// the symmetry invariant survives floating-point conjugations, and rejects
/// non-finite entries.
class SymMatrix {
 public:
  explicit SymMatrix(Matrix entries);

  static SymMatrix identity(int dim);
  static SymMatrix from_diagonal(const Vector& diag);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Matrix& entries() const { return entries_; }
  double operator()(int i, int j) const { return entries_(i, j); }

  double trace() const { return entries_.trace(); }
  double frobenius_sq() const { return entries_.squaredNorm(); }
  bool is_zero() const { return entries_.isZero(0.0); }

 private:
  Matrix entries_;
};

/// Orthogonal factor. Construction checks ||Q^T Q - I||_F <= 1e-10 * dim.
class OrthMatrix {
 public:
  explicit OrthMatrix(Matrix entries);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Matrix& entries() const { return entries_; }

 private:
  Matrix entries_;
};

/// Nonincreasing nonnegative eigenvalue sequence with a positive head.
class Spectrum {
 public:
  explicit Spectrum(std::vector<double> values);

  int dim() const { return static_cast<int>(values_.size()); }
  const std::vector<double>& values() const { return values_; }
  double operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }
  double head() const { return values_.front(); }

  double trace() const;
  double trace_power(int k) const;

 private:
  std::vector<double> values_;
};

/// Tr(A^k) by repeated symmetric multiplication, k >= 1.
double trace_power(const SymMatrix& a, int k);
double trace_power(const Spectrum& s, int k);

/// Largest |eigenvalue| by power iteration with Rayleigh-quotient stopping
/// (relative tolerance `tol`, iteration cap 10 d log d + 1000). Exact for
/// diagonal input. Throws NumericError with the iteration count when the
/// cap is hit.
double operator_norm(const SymMatrix& a, double tol = 1e-12);

/// Tr(A)/||A|| for nonzero PSD input; always in [1, dim].
double effective_rank(const SymMatrix& a, double tol = 1e-12);
double effective_rank(const Spectrum& s);

/// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with column
/// signs fixed so the R diagonal is positive.
OrthMatrix haar_orthogonal(int dim, RandomStream& rng);

/// Kronecker product, capped at product dimension 256 (oracle-test usage).
Matrix kron(const Matrix& a, const Matrix& b);

/// Column-stacking operator: vec(A) of a p x q matrix has length p*q.
Vector vectorize(const Matrix& a);

/// The spectral functionals every bound evaluator consumes. Constructible
/// from a Spectrum (implicitly) or from a symmetric PSD matrix; the two
/// routes agree for Sigma = U diag(lambda) U^T, which is what makes every
/// downstream bound conjugation-invariant.
struct SpectralFunctionals {
  double op_norm = 0.0;
  double tr = 0.0;
  double tr2 = 0.0;
  double tr4 = 0.0;

  SpectralFunctionals(const Spectrum& s);  // NOLINT(google-explicit-constructor)
  explicit SpectralFunctionals(const SymMatrix& a, double tol = 1e-12);

  double r1() const { return tr / op_norm; }
  double r2() const { return tr2 / (op_norm * op_norm); }
  double r4() const { return tr4 / (op_norm * op_norm * op_norm * op_norm); }
  double frob_sq() const { return tr2; }
};

}  // namespace covlab
