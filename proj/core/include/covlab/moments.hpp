#pragma once

#include "covlab/quadrature.hpp"
#include "covlab/spectra.hpp"

namespace covlab {

/// Closed-form E ||Sigma_hat - Sigma||_F^2 for one sampling law, split into
/// its (Tr Lambda)^2 and Tr(Lambda^2) contributions. The two components
/// already carry the law's coefficients, so
///   expected_frob_sq == (trace_sq_term + trace2_term) / n.
struct MomentReport {
  DistKind kind;
  long n = 0;
  double expected_frob_sq = 0.0;
  double trace_sq_term = 0.0;
  double trace2_term = 0.0;
};

/// Per-law closed forms, spectrum route (the expectation is conjugation
/// invariant, so only the spectrum enters):
///   Gaussian      (Tr L)^2 + Tr(L^2)
///   TruncLaplace  (Tr L)^2 + (K - 2) Tr(L^2), K the truncated-Laplace kurtosis
///   UniformSphere d/(d+2) (Tr L)^2 + (d-2)/(d+2) Tr(L^2)
/// all divided by n.
MomentReport expected_frob_error(const Spectrum& lambda, DistKind kind, long n);
MomentReport expected_frob_error(const CovModel& model, long n);

}  // namespace covlab
