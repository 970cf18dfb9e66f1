#pragma once

#include "covlab/spectra.hpp"

namespace covlab {

/// A sample X_1, ..., X_n stored as the rows of an n x d matrix.
struct SampleBatch {
  long n = 0;
  int d = 0;
  Matrix rows;
};

// Truncated Laplace law with density e^{-|x|} 1(|x| <= 6) / Z,
// Z = 2 (1 - e^{-6}). Sampling goes through the exact inverse CDF, so a
// fixed stream replays bitwise.

/// Exact quantile function on [0, 1]; quantile(0.5) == 0 by symmetry.
double trunc_laplace_quantile(double u);
double trunc_laplace_cdf(double x);
/// One draw; always in [-6, 6].
double trunc_laplace_scalar(RandomStream& rng);

/// Second moment of the truncated Laplace law, computed both from the
/// closed-form antiderivative and by adaptive quadrature; throws
/// NumericError if the two routes disagree beyond 1e-12 relative.
double trunc_laplace_sigma_sq();

/// Kurtosis of the truncated Laplace law, dual-route like the second
/// moment (disagreement beyond 1e-9 relative is refused).
double trunc_laplace_kurtosis();

/// Uniform draw from the unit sphere S^{d-1}.
Vector sample_sphere(int d, RandomStream& rng);

/// Isotropic whitened vector for the given law: E xi xi^T = I_d.
/// TruncLaplace components are scaled by 1/sigma, the sphere draw by
/// sqrt(d), the Gaussian is already isotropic.
Vector whitened_xi(DistKind kind, int d, RandomStream& rng);
/// Hot-path overload writing into caller storage of length d.
void whitened_xi(DistKind kind, int d, RandomStream& rng, double* out);

/// n i.i.d. observations X = U Lambda^{1/2} xi with xi the whitened vector
/// of the model's law, so E X X^T = Sigma for every kind.
SampleBatch draw_observations(const CovModel& model, long n, RandomStream& rng);

/// (1/n) sum_i X_i X_i^T, symmetrized. No mean-centering: the estimator
/// assumes E X = 0.
SymMatrix sample_covariance(const SampleBatch& batch);

}  // namespace covlab
