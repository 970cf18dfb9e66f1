#include "covlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace covlab {

double quantile_type7_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw DomainError("quantile: empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("quantile: p outside [0, 1]");
  const std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const double h = p * static_cast<double>(n - 1);
  const auto lo = static_cast<std::size_t>(h);
  if (lo + 1 >= n) return sorted[n - 1];
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double ci_width(std::span<const double> values, double level) {
  if (values.empty()) throw DomainError("ci_width: empty sample");
  if (!(level > 0.0 && level < 1.0)) throw DomainError("ci_width: level outside (0, 1)");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double upper = quantile_type7_sorted(sorted, 0.5 * (1.0 + level));
  const double lower = quantile_type7_sorted(sorted, 0.5 * (1.0 - level));
  return upper - lower;
}

MeanAndSe mean_and_se(std::span<const double> values) {
  if (values.size() < 2) throw DomainError("mean_and_se: need at least two values");
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double variance = ss / (n - 1.0);
  return {mean, std::sqrt(variance / n)};
}

namespace {

std::vector<double> average_ranks(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
    const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman_rho(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw DomainError("spearman_rho: need two samples of equal size >= 2");
  }
  const std::vector<double> rx = average_ranks(x);
  const std::vector<double> ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = rx[i] - mx;
    const double dy = ry[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw DomainError("spearman_rho: degenerate (constant) ranks");
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace covlab
