#pragma once

#include <vector>

#include "covlab/dist_kind.hpp"
#include "covlab/matcore.hpp"

namespace covlab {

/// Eigenvalue profile of the experiment's covariance family at parameter
/// t in [0, 1], dimension d >= 2. The head entry is always 1; for
/// t <= 0.5 the k-th entry (k = 1..d-1) is 2t(1 - k/d), otherwise it is
/// ((d-k)/d)^(2(1-t)). The two branches agree at t = 0.5, which is
/// assigned to the first branch for bit-reproducibility. Effective rank
/// runs from 1 (t = 0) to d (t = 1).
Spectrum lambda_profile(double t, int d);

/// Equispaced parameter grid {k/(count-1) : k = 0..count-1}; the default
/// count of 70 is the experiment grid.
std::vector<double> parameter_grid(int count = 70);

/// A population model: orthogonal factor, spectrum, sampling law, and the
/// cached covariance U diag(lambda) U^T. Immutable after construction and
/// safe to share read-only across threads.
struct CovModel {
  OrthMatrix u;
  Spectrum lambda;
  DistKind dist;
  SymMatrix sigma;

  int dim() const { return lambda.dim(); }

  static CovModel make(double t, int d, DistKind dist, RandomStream& rng);
  static CovModel from_parts(OrthMatrix u, Spectrum lambda, DistKind dist);
};

}  // namespace covlab
