#pragma once

#include <utility>

#include "covlab/matcore.hpp"

namespace covlab {

/// Tail-behaviour constants of the whitened vector, plus the (delta, n)
/// pair every evaluator needs. When derived from the quadratic-form Orlicz
/// constant omega, tau = 64 omega^2 and rho_max = 1/(6 omega).
struct TailParams {
  double omega = 0.0;  // 0 when tau/rho_max were supplied directly
  double tau = 0.0;
  double rho_max = 0.0;
  double alpha = 0.0;
  double delta = 0.0;
  long n = 0;

  static TailParams from_omega(double omega, double alpha, double delta, long n);
  static TailParams direct(double tau, double rho_max, double alpha, double delta,
                           long n);
  void validate() const;
};

/// (tau, rho_max) = (64 omega^2, 1/(6 omega)).
std::pair<double, double> tau_from_omega(double omega);

/// Radius constant of the upper-bound admissibility conditions:
///   2 r(S) + (1/2) sqrt(tau r(S^2)) + 2 sqrt(e log(2/delta)).
double admissibility_radius(const SpectralFunctionals& s, double tau, double delta);

/// Verdict plus relative slack margins (rhs - lhs)/lhs; a negative margin
/// names the violated inequality.
struct AdmissibilityCheck {
  bool ok = false;
  double margin1 = 0.0;
  double margin2 = 0.0;
};

/// Sample-size conditions of the upper deviation bound:
///   ||S|| R(S, delta) <= rho_max sqrt(n)   and
///   r(S)^2 R^2 (tau^3 R^2 / 4 + 3 tau^2) <= 36 n.
AdmissibilityCheck upper_admissible(const SpectralFunctionals& s, double tau,
                                    double rho_max, double delta, long n);

/// Sample-size conditions of the lower deviation bound:
///   7 a^2 r(S^2)^2 (r(S)^2 + a r(S^2)) <= n   and
///   96 (1 + sqrt(a))^2 r(S^2) (r(S)^2 + a r(S^2)) <= n.
AdmissibilityCheck lower_admissible(const SpectralFunctionals& s, double alpha, long n);

/// High-probability upper deviation of ||Sigma_hat - Sigma||_F^2 from its
/// mean (admissibility assumed checked by the caller):
///   (4 ||S||^2 / n) max{ sqrt(2 (tau r(S^2)^2 + tau^2 r(S^4)) log(2/delta)),
///                        4 e tau log(2/delta) }.
double upper_deviation_bound(const SpectralFunctionals& s, double tau, double delta,
                             long n);

/// Variance proxy of the lower deviation bound:
///   a r(S^2)^2 + a^2 r(S^4) + 15 a^2 r(S)^2 r(S^2) (r(S)^2 + a r(S^2)) / (4 n).
double lower_variance_factor(const SpectralFunctionals& s, double alpha, long n);

/// (4 ||S||^2 / n) (2 log(5/delta) v sqrt(2 F log(5/delta))) with F the
/// lower variance factor.
double lower_deviation_bound(const SpectralFunctionals& s, double alpha, double delta,
                             long n);

/// Bound on |ratio - 1| for the normalized error statistic. `primary` is
/// the sharp two-term form max{r(S^2) sqrt(L), L} / (r(S)^2 - r(S^2)) with
/// L = log(7/delta); `envelope` is its simplification
/// max{sqrt(L)/(r-1), L/(r (r-1))}, which always dominates. Requires
/// effective rank > 1.
struct RatioBound {
  double primary = 0.0;
  double envelope = 0.0;
};
RatioBound ratio_deviation(const SpectralFunctionals& s, double delta);

/// The peeling series sum_{k>=0} exp{-(e^k - 1) u / (2e)}, u > 0.
/// Truncated once the next term drops below 1e-16; the doubly exponential
/// decay certifies the discarded tail below ~2e-16.
double g_series(double u);
struct GSeriesValue {
  double value = 0.0;
  double tail_bound = 0.0;
};
GSeriesValue g_series_with_tail(double u);

/// Remainder control factor of the restricted-moment bound:
///   G(l, z) = l q^2 / (36 n) * (tau^3 q^2 + 3 tau^2),
///   q = z l + sqrt(2 l) Tr(S).
/// Monotone under the peeling substitution (e^{-k} l, e^k z ||S||).
double curvature_factor(double lambda, double z, const SpectralFunctionals& s,
                        double tau, long n);

/// The optimized Chernoff pair of the upper-tail argument:
///   z^2 = m + max{4 v sqrt(2 log(2/delta)), 16 e (kappa v ||S||^2) log(2/delta)}
///   lambda = e (z^2 - m) / (8 v^2)  clamped at  1 / (4 (kappa v ||S||^2)).
struct ChernoffParams {
  double lambda = 0.0;
  double z_sq = 0.0;
  bool clamped = false;  // true when lambda sits at the kappa clamp
};
ChernoffParams choose_lambda_z(const SpectralFunctionals& s, double kappa, double v_sq,
                               double m, double delta);

/// Exponent -lambda (z^2 - m) / (2e) + 2 lambda^2 v^2 / e^2 evaluated at the
/// chosen pair, and its closed form
/// -min{(z^2 - m)^2 / (32 v^2), (z^2 - m) / (16 e (kappa v ||S||^2))}.
/// The two agree exactly on the unclamped branch; on the clamped branch the
/// direct value is strictly smaller (the safe direction).
double chernoff_exponent(const ChernoffParams& p, double m, double v_sq);
double chernoff_exponent_closed_form(const SpectralFunctionals& s, double kappa,
                                     const ChernoffParams& p, double m, double v_sq);

/// Truncation radius of the Gaussian window in the lower-tail argument:
///   rho^2 = 3 ||S||_F^2 (r(S)^2 + alpha r(S^2)).
double trunc_radius_sq(const SpectralFunctionals& s, double alpha);

/// Two-sided enclosure of m = n E ||Sigma_hat - Sigma||_F^2:
///   (Tr S)^2 - Tr(S^2) <= m <= (Tr S)^2 + (alpha - 1) Tr(S^2).
std::pair<double, double> mean_sandwich(const SpectralFunctionals& s, double alpha);

/// Upper bounds on the second-moment constants:
///   v^2  <= alpha (Tr S^2)^2 + (alpha^2 - alpha) Tr(S^4)
///   kappa <= alpha ||S||^2.
struct VarianceBounds {
  double v_sq_hi = 0.0;
  double kappa_hi = 0.0;
};
VarianceBounds variance_bounds(const SpectralFunctionals& s, double alpha);

/// Checks min{2 rho^2 / ||S||_F^2,
///            (rho^2 - (Tr S)^2)^2 / (||S||_F^4 + ||S||^2 (rho^2 - (Tr S)^2))}
///   >= r(S)^2 + (alpha - 1) r(S^2).
/// Always true for alpha >= 1; a false return flags an implementation bug.
/// alpha < 1 is untested territory and refused.
bool rho_inequality_check(const SpectralFunctionals& s, double alpha);

/// Everything the bounds CLI reports for one (spectrum, TailParams) pair.
struct BoundReport {
  double r1 = 0.0, r2 = 0.0, r4 = 0.0;
  double radius = 0.0;  // R_const
  bool upper_ok = false;
  double upper_margin1 = 0.0, upper_margin2 = 0.0;
  double upper_dev = 0.0;
  bool lower_ok = false;
  double lower_margin1 = 0.0, lower_margin2 = 0.0;
  double frak_r = 0.0;
  double lower_dev = 0.0;
  double ratio_dev = 0.0;       // NaN for rank-1 spectra
  double ratio_envelope = 0.0;  // NaN for rank-1 spectra
};
BoundReport evaluate_bounds(const SpectralFunctionals& s, const TailParams& params);

}  // namespace covlab
