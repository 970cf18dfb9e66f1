#pragma once

#include <string>
#include <vector>

#include "covlab/bounds.hpp"
#include "covlab/samplers.hpp"

namespace covlab {

/// One Monte Carlo estimate with its plug-in standard error.
struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
  long reps = 0;
};

/// Exponentially tilted moment problem: tilt matrix U (Frobenius norm at
/// most rho_max), test direction V != 0, and the law of the whitened
/// vector. Only the symmetric parts of U and V matter for quadratic forms,
/// so both are stored symmetric.
struct TiltedSpec {
  SymMatrix tilt;
  SymMatrix direction;
  DistKind dist;
  int d;

  TiltedSpec(SymMatrix tilt, SymMatrix direction, DistKind dist, double rho_max);
};

/// MC mean of n ||Sigma_hat - Sigma||_F^2 over `reps` independent samples
/// of size n, with plug-in standard error.
McEstimate mc_mean_frob_error(const CovModel& model, long n, long reps,
                              RandomStream& rng);

/// Empirical lower bound on the fourth-moment constant: the max over
/// canonical plus random unit-Frobenius directions V of
/// sqrt(E (xi^T V xi - E xi^T V xi)^4). The sup over all V is not
/// computable; treat the value as a floor, never a certificate.
McEstimate estimate_alpha(DistKind dist, int d, long reps, int directions,
                          RandomStream& rng);

/// Empirical lower bound on the quadratic-form psi_1 constant: the max over
/// directions of the Orlicz psi_1 norm of xi^T V xi - Tr(V), estimated by
/// bisection on the MC exponential moment. Feed through tau_from_omega to
/// get desk-scale surrogates for tau and rho_max.
McEstimate estimate_omega(DistKind dist, int d, long reps, int directions,
                          RandomStream& rng);

/// Empirical lower bound on the tilted fourth-moment constant: the max of
/// sqrt(tilted fourth central moment) over tilts U in {0} plus random
/// points at radius rho_max/2 and rho_max, and test directions V. Much
/// sharper than the 64 omega^2 mapping, but a floor, not a certificate.
McEstimate estimate_tau(DistKind dist, int d, double rho_max, long reps, int directions,
                        RandomStream& rng);

/// Plug-in estimate of ||E vec(XX^T - S) vec(XX^T - S)^T||_F^2. Holds the
/// d^2 x d^2 mean densely, so d is capped at 12; the estimator is biased
/// upward by O(1/reps).
McEstimate mc_v_sq(const CovModel& model, long reps, RandomStream& rng);

/// Lower bound on kappa = sup_{||U||_F = 1} E [X^T U X - Tr(U Sigma)]^2 by
/// maximizing over sampled directions.
McEstimate mc_kappa(const CovModel& model, long reps, int directions,
                    RandomStream& rng);

/// Self-normalized importance-sampling estimate of the k-th central moment
/// of xi^T V xi under the tilted measure weighting by e^{xi^T U xi},
/// k in [1, 4]. Requires a bounded tilt weight: any U for the two bounded
/// laws, small U (operator norm <= 0.2) for the Gaussian.
McEstimate tilted_moment(const TiltedSpec& spec, int k, long reps, RandomStream& rng);

/// Compares the central second difference of phi(U) = log E e^{xi^T U xi}
/// along V (step h, common random numbers) against the tilted second
/// moment. The tolerance combines both MC standard errors with an
/// h^2 tau_hat^{3/2} ||V||^3 curvature slack.
struct DerivativeCheck {
  double second_difference = 0.0;
  double tilted_second = 0.0;
  double discrepancy = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  double se_difference = 0.0;
  double se_tilted = 0.0;
  double h = 0.0;
};
DerivativeCheck derivative_identity_check(const TiltedSpec& spec, double h, long reps,
                                          double tau_hat, RandomStream& rng);

/// Runs the Kronecker/vec identity suite on random matrices of dimension
/// at most 4 and aggregates the worst residual.
struct KronCheckReport {
  long trials = 0;
  double max_residual = 0.0;
  bool pass = false;
};
KronCheckReport brute_kron_checks(long trials, RandomStream& rng);

struct VerifyResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// The `covlab verify` suite: every oracle cross-check at desk scale.
std::vector<VerifyResult> run_verify_suite(bool full, std::uint64_t seed);

}  // namespace covlab
