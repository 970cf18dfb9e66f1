#pragma once

#include <span>
#include <vector>

#include "covlab/error.hpp"

namespace covlab {

/// Linear-interpolation quantile of a sorted sample (type-7 convention:
/// h = (n-1)p, interpolate between the floor(h)-th and next order statistic).
double quantile_type7_sorted(std::span<const double> sorted, double p);

/// Width of the central empirical confidence interval at the given level:
/// quantile((1+level)/2) - quantile((1-level)/2). Permutation invariant.
double ci_width(std::span<const double> values, double level);

struct MeanAndSe {
  double mean = 0.0;
  double std_error = 0.0;
};
MeanAndSe mean_and_se(std::span<const double> values);

/// Spearman rank correlation with average ranks for ties.
double spearman_rho(std::span<const double> x, std::span<const double> y);

}  // namespace covlab
