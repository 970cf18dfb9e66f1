#include "covlab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace covlab {
namespace {

constexpr double kE = std::numbers::e;

double relative_margin(double lhs, double rhs) { return (rhs - lhs) / lhs; }

}  // namespace

std::pair<double, double> tau_from_omega(double omega) {
  if (!(omega > 0.0)) throw DomainError("tau_from_omega: omega must be positive");
  return {64.0 * omega * omega, 1.0 / (6.0 * omega)};
}

TailParams TailParams::from_omega(double omega, double alpha, double delta, long n) {
  const auto [tau, rho_max] = tau_from_omega(omega);
  TailParams p{omega, tau, rho_max, alpha, delta, n};
  p.validate();
  return p;
}

TailParams TailParams::direct(double tau, double rho_max, double alpha, double delta,
                              long n) {
  TailParams p{0.0, tau, rho_max, alpha, delta, n};
  p.validate();
  return p;
}

void TailParams::validate() const {
  if (!(tau > 0.0) || !(rho_max > 0.0) || !(alpha > 0.0)) {
    throw DomainError("TailParams: tau, rho_max and alpha must be positive");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw DomainError("TailParams: delta must lie in (0, 1)");
  }
  if (n < 1) throw DomainError("TailParams: n must be >= 1");
}

double admissibility_radius(const SpectralFunctionals& s, double tau, double delta) {
  if (!(tau > 0.0)) throw DomainError("admissibility_radius: tau must be positive");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw DomainError("admissibility_radius: delta must lie in (0, 1)");
  }
  return 2.0 * s.r1() + 0.5 * std::sqrt(tau * s.r2()) +
         2.0 * std::sqrt(kE * std::log(2.0 / delta));
}

AdmissibilityCheck upper_admissible(const SpectralFunctionals& s, double tau,
                                    double rho_max, double delta, long n) {
  if (!(rho_max > 0.0)) throw DomainError("upper_admissible: rho_max must be positive");
  const double radius = admissibility_radius(s, tau, delta);
  const double lhs1 = s.op_norm * radius;
  const double rhs1 = rho_max * std::sqrt(static_cast<double>(n));
  const double r1 = s.r1();
  const double lhs2 =
      r1 * r1 * radius * radius * (tau * tau * tau * radius * radius / 4.0 + 3.0 * tau * tau);
  const double rhs2 = 36.0 * static_cast<double>(n);
  AdmissibilityCheck check;
  check.margin1 = relative_margin(lhs1, rhs1);
  check.margin2 = relative_margin(lhs2, rhs2);
  check.ok = lhs1 <= rhs1 && lhs2 <= rhs2;
  return check;
}

AdmissibilityCheck lower_admissible(const SpectralFunctionals& s, double alpha, long n) {
  if (!(alpha > 0.0)) throw DomainError("lower_admissible: alpha must be positive");
  const double r1 = s.r1();
  const double r2 = s.r2();
  const double mix = r1 * r1 + alpha * r2;
  const double lhs1 = 7.0 * alpha * alpha * r2 * r2 * mix;
  const double root = 1.0 + std::sqrt(alpha);
  const double lhs2 = 96.0 * root * root * r2 * mix;
  const double rhs = static_cast<double>(n);
  AdmissibilityCheck check;
  check.margin1 = relative_margin(lhs1, rhs);
  check.margin2 = relative_margin(lhs2, rhs);
  check.ok = lhs1 <= rhs && lhs2 <= rhs;
  return check;
}

double upper_deviation_bound(const SpectralFunctionals& s, double tau, double delta,
                             long n) {
  if (!(tau > 0.0)) throw DomainError("upper_deviation_bound: tau must be positive");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw DomainError("upper_deviation_bound: delta must lie in (0, 1)");
  }
  const double log_term = std::log(2.0 / delta);
  const double r2 = s.r2();
  const double r4 = s.r4();
  const double sub_gaussian =
      std::sqrt(2.0 * (tau * r2 * r2 + tau * tau * r4) * log_term);
  const double sub_exponential = 4.0 * kE * tau * log_term;
  return 4.0 * s.op_norm * s.op_norm / static_cast<double>(n) *
         std::max(sub_gaussian, sub_exponential);
}

double lower_variance_factor(const SpectralFunctionals& s, double alpha, long n) {
  if (!(alpha > 0.0)) throw DomainError("lower_variance_factor: alpha must be positive");
  if (n < 1) throw DomainError("lower_variance_factor: n must be >= 1");
  const double r1 = s.r1();
  const double r2 = s.r2();
  const double r4 = s.r4();
  return alpha * r2 * r2 + alpha * alpha * r4 +
         15.0 * alpha * alpha * r1 * r1 * r2 * (r1 * r1 + alpha * r2) /
             (4.0 * static_cast<double>(n));
}

double lower_deviation_bound(const SpectralFunctionals& s, double alpha, double delta,
                             long n) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw DomainError("lower_deviation_bound: delta must lie in (0, 1)");
  }
  const double log_term = std::log(5.0 / delta);
  const double factor = lower_variance_factor(s, alpha, n);
  return 4.0 * s.op_norm * s.op_norm / static_cast<double>(n) *
         std::max(2.0 * log_term, std::sqrt(2.0 * factor * log_term));
}

RatioBound ratio_deviation(const SpectralFunctionals& s, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw DomainError("ratio_deviation: delta must lie in (0, 1)");
  }
  const double r1 = s.r1();
  const double r2 = s.r2();
  if (!(r1 > 1.0)) {
    throw DomainError("ratio_deviation: effective rank must exceed 1");
  }
  const double log_term = std::log(7.0 / delta);
  const double gap = r1 * r1 - r2;  // positive: r2 <= r1 < r1^2 when r1 > 1
  RatioBound bound;
  bound.primary = std::max(r2 * std::sqrt(log_term), log_term) / gap;
  bound.envelope = std::max(std::sqrt(log_term) / (r1 - 1.0),
                            log_term / (r1 * (r1 - 1.0)));
  return bound;
}

GSeriesValue g_series_with_tail(double u) {
  if (!(u > 0.0)) throw DomainError("g_series: series diverges for u <= 0");
  double sum = 0.0;
  double ek = 1.0;  // e^k
  double term = 1.0;
  for (int k = 0;; ++k) {
    sum += term;
    ek *= kE;
    term = std::exp(-(ek - 1.0) * u / (2.0 * kE));
    if (term < 1e-16) {
      // ratio of consecutive omitted terms; far below 1/2 at this depth,
      // which makes the geometric tail certificate valid
      const double ratio = std::exp(-ek * (kE - 1.0) * u / (2.0 * kE));
      if (!(ratio <= 0.5)) {
        throw NumericError("g_series: tail certificate unavailable", k, ratio);
      }
      return {sum, term / (1.0 - ratio)};
    }
    if (k > 200) {
      throw NumericError("g_series: no truncation reached", k, term);
    }
  }
}

double g_series(double u) { return g_series_with_tail(u).value; }

double curvature_factor(double lambda, double z, const SpectralFunctionals& s,
                        double tau, long n) {
  if (!(lambda > 0.0) || !(z > 0.0)) {
    throw DomainError("curvature_factor: lambda and z must be positive");
  }
  const double q = z * lambda + std::sqrt(2.0 * lambda) * s.tr;
  return lambda * q * q / (36.0 * static_cast<double>(n)) *
         (tau * tau * tau * q * q + 3.0 * tau * tau);
}

ChernoffParams choose_lambda_z(const SpectralFunctionals& s, double kappa, double v_sq,
                               double m, double delta) {
  if (!(kappa > 0.0) || !(v_sq > 0.0) || !(m > 0.0)) {
    throw DomainError("choose_lambda_z: kappa, v_sq and m must be positive");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw DomainError("choose_lambda_z: delta must lie in (0, 1)");
  }
  const double log_term = std::log(2.0 / delta);
  const double variance_scale = std::max(kappa, s.op_norm * s.op_norm);
  const double gap = std::max(4.0 * std::sqrt(v_sq) * std::sqrt(2.0 * log_term),
                              16.0 * kE * variance_scale * log_term);
  const double unclamped = kE * gap / (8.0 * v_sq);
  const double clamp = 1.0 / (4.0 * variance_scale);
  ChernoffParams p;
  p.z_sq = m + gap;
  p.lambda = std::min(unclamped, clamp);
  p.clamped = unclamped > clamp;
  return p;
}

double chernoff_exponent(const ChernoffParams& p, double m, double v_sq) {
  const double gap = p.z_sq - m;
  return -p.lambda * gap / (2.0 * kE) + 2.0 * p.lambda * p.lambda * v_sq / (kE * kE);
}

double chernoff_exponent_closed_form(const SpectralFunctionals& s, double kappa,
                                     const ChernoffParams& p, double m, double v_sq) {
  const double gap = p.z_sq - m;
  const double variance_scale = std::max(kappa, s.op_norm * s.op_norm);
  return -std::min(gap * gap / (32.0 * v_sq), gap / (16.0 * kE * variance_scale));
}

double trunc_radius_sq(const SpectralFunctionals& s, double alpha) {
  if (!(alpha > 0.0)) throw DomainError("trunc_radius_sq: alpha must be positive");
  return 3.0 * s.frob_sq() * (s.r1() * s.r1() + alpha * s.r2());
}

std::pair<double, double> mean_sandwich(const SpectralFunctionals& s, double alpha) {
  if (!(alpha > 0.0)) throw DomainError("mean_sandwich: alpha must be positive");
  const double tr_sq = s.tr * s.tr;
  return {tr_sq - s.tr2, tr_sq + (alpha - 1.0) * s.tr2};
}

VarianceBounds variance_bounds(const SpectralFunctionals& s, double alpha) {
  if (!(alpha > 0.0)) throw DomainError("variance_bounds: alpha must be positive");
  return {alpha * s.tr2 * s.tr2 + (alpha * alpha - alpha) * s.tr4,
          alpha * s.op_norm * s.op_norm};
}

bool rho_inequality_check(const SpectralFunctionals& s, double alpha) {
  if (!(alpha >= 1.0)) {
    throw DomainError("rho_inequality_check: alpha < 1 is untested territory");
  }
  const double rho_sq = trunc_radius_sq(s, alpha);
  const double frob_sq = s.frob_sq();
  const double excess = rho_sq - s.tr * s.tr;
  const double lhs1 = 2.0 * rho_sq / frob_sq;
  const double lhs2 =
      excess * excess / (frob_sq * frob_sq + s.op_norm * s.op_norm * excess);
  const double rhs = s.r1() * s.r1() + (alpha - 1.0) * s.r2();
  return std::min(lhs1, lhs2) >= rhs;
}

BoundReport evaluate_bounds(const SpectralFunctionals& s, const TailParams& params) {
  params.validate();
  BoundReport report;
  report.r1 = s.r1();
  report.r2 = s.r2();
  report.r4 = s.r4();
  report.radius = admissibility_radius(s, params.tau, params.delta);

  const AdmissibilityCheck upper =
      upper_admissible(s, params.tau, params.rho_max, params.delta, params.n);
  report.upper_ok = upper.ok;
  report.upper_margin1 = upper.margin1;
  report.upper_margin2 = upper.margin2;
  report.upper_dev = upper_deviation_bound(s, params.tau, params.delta, params.n);

  const AdmissibilityCheck lower = lower_admissible(s, params.alpha, params.n);
  report.lower_ok = lower.ok;
  report.lower_margin1 = lower.margin1;
  report.lower_margin2 = lower.margin2;
  report.frak_r = lower_variance_factor(s, params.alpha, params.n);
  report.lower_dev = lower_deviation_bound(s, params.alpha, params.delta, params.n);

  if (report.r1 > 1.0) {
    const RatioBound ratio = ratio_deviation(s, params.delta);
    report.ratio_dev = ratio.primary;
    report.ratio_envelope = ratio.envelope;
  } else {
    report.ratio_dev = std::numeric_limits<double>::quiet_NaN();
    report.ratio_envelope = std::numeric_limits<double>::quiet_NaN();
  }
  return report;
}

}  // namespace covlab
