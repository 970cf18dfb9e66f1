#include "covlab/oracle.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "covlab/moments.hpp"
#include "covlab/stats.hpp"

namespace covlab {
namespace {

constexpr int kBatches = 16;

double batch_se(const std::vector<double>& batch_values) {
  return mean_and_se(batch_values).std_error;
}

/// Random point on the unit Frobenius sphere of symmetric matrices.
SymMatrix random_unit_direction(int d, RandomStream& rng) {
  Matrix g(d, d);
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) g(i, j) = rng.gaussian();
  }
  Matrix s = 0.5 * (g + g.transpose());
  const double norm = s.norm();
  if (norm == 0.0) return random_unit_direction(d, rng);
  return SymMatrix(s / norm);
}

std::vector<SymMatrix> direction_sweep(int d, int count, RandomStream& rng) {
  std::vector<SymMatrix> dirs;
  dirs.push_back(SymMatrix(Matrix::Identity(d, d) / std::sqrt(static_cast<double>(d))));
  Matrix e11 = Matrix::Zero(d, d);
  e11(0, 0) = 1.0;
  dirs.push_back(SymMatrix(e11));
  if (d >= 2) {
    Matrix e12 = Matrix::Zero(d, d);
    e12(0, 1) = e12(1, 0) = 1.0 / std::sqrt(2.0);
    dirs.push_back(SymMatrix(e12));
  }
  while (static_cast<int>(dirs.size()) < count) {
    dirs.push_back(random_unit_direction(d, rng));
  }
  return dirs;
}

Matrix draw_whitened_batch(DistKind dist, int d, long reps, RandomStream& rng) {
  Matrix xi(reps, d);
  Vector row(d);
  for (long i = 0; i < reps; ++i) {
    whitened_xi(dist, d, rng, row.data());
    xi.row(i) = row.transpose();
  }
  return xi;
}

Vector quadratic_forms(const Matrix& xi, const SymMatrix& v) {
  return ((xi * v.entries()).array() * xi.array()).rowwise().sum();
}

/// psi_1 Orlicz norm of a sample: smallest t with mean(exp(|x|/t)) <= 2,
/// located by bisection. Zero for an (almost) identically zero sample.
double psi1_norm_mc(const Vector& sample) {
  const double max_abs = sample.cwiseAbs().maxCoeff();
  if (max_abs < 1e-300) return 0.0;
  const auto excess = [&](double t) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < sample.size(); ++i) {
      sum += std::exp(std::min(std::abs(sample[i]) / t, 700.0));
    }
    return sum / static_cast<double>(sample.size()) - 2.0;
  };
  double hi = std::max(sample.cwiseAbs().mean(), 1e-300);
  int guard = 0;
  while (excess(hi) > 0.0 && guard++ < 200) hi *= 2.0;
  double lo = hi;
  guard = 0;
  while (excess(lo * 0.5) <= 0.0 && guard++ < 200) lo *= 0.5;
  lo *= 0.5;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (excess(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct TiltedAccumulator {
  double point = 0.0;
  std::vector<double> batch_values;
};

/// Self-normalized tilted central k-th moment; per-batch estimates give the
/// standard error. Weights are shifted by max(q0) before exponentiation.
TiltedAccumulator tilted_central_moment(const Vector& q_tilt, const Vector& q_dir,
                                        int k) {
  const long reps = q_tilt.size();
  const double shift = q_tilt.maxCoeff();
  Vector w(reps);
  for (long i = 0; i < reps; ++i) w[i] = std::exp(q_tilt[i] - shift);

  const auto estimate = [&](long begin, long end) {
    double sw = 0.0, swq = 0.0;
    for (long i = begin; i < end; ++i) {
      sw += w[i];
      swq += w[i] * q_dir[i];
    }
    const double mu = swq / sw;
    double swc = 0.0;
    for (long i = begin; i < end; ++i) {
      swc += w[i] * std::pow(q_dir[i] - mu, k);
    }
    return swc / sw;
  };

  TiltedAccumulator acc;
  acc.point = estimate(0, reps);
  const long per_batch = reps / kBatches;
  for (int b = 0; b < kBatches; ++b) {
    const long begin = b * per_batch;
    const long end = (b == kBatches - 1) ? reps : begin + per_batch;
    acc.batch_values.push_back(estimate(begin, end));
  }
  return acc;
}

}  // namespace

TiltedSpec::TiltedSpec(SymMatrix tilt_in, SymMatrix direction_in, DistKind dist,
                       double rho_max)
    : tilt(std::move(tilt_in)), direction(std::move(direction_in)), dist(dist),
      d(tilt.dim()) {
  if (direction.dim() != d) throw DomainError("TiltedSpec: dimension mismatch");
  if (!(std::sqrt(tilt.frobenius_sq()) <= rho_max)) {
    throw DomainError("TiltedSpec: ||U||_F exceeds rho_max");
  }
  if (direction.is_zero()) throw DomainError("TiltedSpec: direction must be nonzero");
}

McEstimate mc_mean_frob_error(const CovModel& model, long n, long reps,
                              RandomStream& rng) {
  if (reps < 100) throw DomainError("mc_mean_frob_error: reps must be >= 100");
  std::vector<double> values(static_cast<std::size_t>(reps));
  for (long r = 0; r < reps; ++r) {
    const SampleBatch batch = draw_observations(model, n, rng);
    const SymMatrix cov = sample_covariance(batch);
    values[static_cast<std::size_t>(r)] =
        static_cast<double>(n) * (cov.entries() - model.sigma.entries()).squaredNorm();
  }
  const MeanAndSe stats = mean_and_se(values);
  return {stats.mean, stats.std_error, reps};
}

McEstimate estimate_alpha(DistKind dist, int d, long reps, int directions,
                          RandomStream& rng) {
  if (directions < 10) throw DomainError("estimate_alpha: directions must be >= 10");
  if (reps < 100) throw DomainError("estimate_alpha: reps must be >= 100");
  const Matrix xi = draw_whitened_batch(dist, d, reps, rng);
  const std::vector<SymMatrix> dirs = direction_sweep(d, directions, rng);

  double best = -1.0;
  double best_se = 0.0;
  for (const SymMatrix& v : dirs) {
    const Vector q = quadratic_forms(xi, v);
    const double mu = q.mean();
    std::vector<double> batch_fourth;
    const long per_batch = reps / kBatches;
    double total = 0.0;
    for (int b = 0; b < kBatches; ++b) {
      const long begin = b * per_batch;
      const long end = (b == kBatches - 1) ? reps : begin + per_batch;
      double s = 0.0;
      for (long i = begin; i < end; ++i) s += std::pow(q[i] - mu, 4);
      batch_fourth.push_back(s / static_cast<double>(end - begin));
      total += s;
    }
    const double fourth = total / static_cast<double>(reps);
    const double value = std::sqrt(fourth);
    if (value > best) {
      best = value;
      // delta method through the square root
      best_se = value > 0.0 ? batch_se(batch_fourth) / (2.0 * value) : 0.0;
    }
  }
  return {best, best_se, reps};
}

McEstimate estimate_omega(DistKind dist, int d, long reps, int directions,
                          RandomStream& rng) {
  if (directions < 10) throw DomainError("estimate_omega: directions must be >= 10");
  if (reps < 100) throw DomainError("estimate_omega: reps must be >= 100");
  const Matrix xi = draw_whitened_batch(dist, d, reps, rng);
  const std::vector<SymMatrix> dirs = direction_sweep(d, directions, rng);

  double best = -1.0;
  double best_se = 0.0;
  for (const SymMatrix& v : dirs) {
    Vector eta = quadratic_forms(xi, v);
    eta.array() -= v.trace();
    const double value = psi1_norm_mc(eta);
    if (value > best) {
      // spread of half-sample estimates as a rough error gauge
      const double first = psi1_norm_mc(eta.head(reps / 2));
      const double second = psi1_norm_mc(eta.tail(reps - reps / 2));
      best = value;
      best_se = 0.5 * std::abs(first - second);
    }
  }
  return {best, best_se, reps};
}

McEstimate estimate_tau(DistKind dist, int d, double rho_max, long reps, int directions,
                        RandomStream& rng) {
  if (!(rho_max > 0.0)) throw DomainError("estimate_tau: rho_max must be positive");
  if (directions < 10) throw DomainError("estimate_tau: directions must be >= 10");
  if (reps < 10000) throw DomainError("estimate_tau: reps must be >= 10^4");
  const Matrix xi = draw_whitened_batch(dist, d, reps, rng);

  std::vector<SymMatrix> tilts;
  tilts.push_back(SymMatrix(Matrix::Zero(d, d)));
  for (double radius : {0.5 * rho_max, rho_max}) {
    for (int i = 0; i < 3; ++i) {
      const SymMatrix unit = random_unit_direction(d, rng);
      tilts.push_back(SymMatrix(radius * unit.entries()));
    }
  }
  const std::vector<SymMatrix> dirs = direction_sweep(d, directions, rng);

  double best = -1.0;
  double best_se = 0.0;
  for (const SymMatrix& u : tilts) {
    const Vector q_tilt = quadratic_forms(xi, u);
    for (const SymMatrix& v : dirs) {
      const Vector q_dir = quadratic_forms(xi, v);
      const TiltedAccumulator acc = tilted_central_moment(q_tilt, q_dir, 4);
      const double value = std::sqrt(std::max(acc.point, 0.0));
      if (value > best) {
        best = value;
        best_se = value > 0.0 ? batch_se(acc.batch_values) / (2.0 * value) : 0.0;
      }
    }
  }
  return {best, best_se, reps};
}

McEstimate mc_v_sq(const CovModel& model, long reps, RandomStream& rng) {
  const int d = model.dim();
  if (d > 12) throw SizeError("mc_v_sq: d capped at 12 (dense d^2 x d^2 mean)");
  if (reps < 10000) throw DomainError("mc_v_sq: reps must be >= 10^4");

  const SampleBatch batch = draw_observations(model, reps, rng);
  const long per_batch = reps / kBatches;
  std::vector<Matrix> partial(kBatches, Matrix::Zero(d * d, d * d));
  for (long i = 0; i < reps; ++i) {
    const Vector x = batch.rows.row(i).transpose();
    const Matrix dev = x * x.transpose() - model.sigma.entries();
    const Vector v = vectorize(dev);
    const int b = std::min<int>(static_cast<int>(i / per_batch), kBatches - 1);
    partial[static_cast<std::size_t>(b)].noalias() += v * v.transpose();
  }
  Matrix total = Matrix::Zero(d * d, d * d);
  std::vector<double> batch_values;
  for (int b = 0; b < kBatches; ++b) {
    total += partial[static_cast<std::size_t>(b)];
    const long begin = b * per_batch;
    const long end = (b == kBatches - 1) ? reps : begin + per_batch;
    batch_values.push_back(
        (partial[static_cast<std::size_t>(b)] / static_cast<double>(end - begin))
            .squaredNorm());
  }
  const double value = (total / static_cast<double>(reps)).squaredNorm();
  return {value, batch_se(batch_values), reps};
}

McEstimate mc_kappa(const CovModel& model, long reps, int directions,
                    RandomStream& rng) {
  if (directions < 10) throw DomainError("mc_kappa: directions must be >= 10");
  if (reps < 100) throw DomainError("mc_kappa: reps must be >= 100");
  const int d = model.dim();
  const SampleBatch batch = draw_observations(model, reps, rng);
  const std::vector<SymMatrix> dirs = direction_sweep(d, directions, rng);

  double best = -1.0;
  double best_se = 0.0;
  for (const SymMatrix& u : dirs) {
    const double centered_at = (u.entries() * model.sigma.entries()).trace();
    Vector q = quadratic_forms(batch.rows, u);
    q.array() -= centered_at;
    std::vector<double> batch_values;
    const long per_batch = reps / kBatches;
    double total = 0.0;
    for (int b = 0; b < kBatches; ++b) {
      const long begin = b * per_batch;
      const long end = (b == kBatches - 1) ? reps : begin + per_batch;
      double s = 0.0;
      for (long i = begin; i < end; ++i) s += q[i] * q[i];
      batch_values.push_back(s / static_cast<double>(end - begin));
      total += s;
    }
    const double value = total / static_cast<double>(reps);
    if (value > best) {
      best = value;
      best_se = batch_se(batch_values);
    }
  }
  return {best, best_se, reps};
}

McEstimate tilted_moment(const TiltedSpec& spec, int k, long reps, RandomStream& rng) {
  if (k < 1 || k > 4) throw DomainError("tilted_moment: k must lie in [1, 4]");
  if (reps < 10000) throw DomainError("tilted_moment: reps must be >= 10^4");
  if (spec.dist == DistKind::Gaussian && operator_norm(spec.tilt) > 0.2) {
    throw DomainError(
        "tilted_moment: Gaussian tilt weight unbounded for this U; need ||U|| <= 0.2");
  }
  const Matrix xi = draw_whitened_batch(spec.dist, spec.d, reps, rng);
  const Vector q_tilt = quadratic_forms(xi, spec.tilt);
  const Vector q_dir = quadratic_forms(xi, spec.direction);
  const TiltedAccumulator acc = tilted_central_moment(q_tilt, q_dir, k);
  return {acc.point, batch_se(acc.batch_values), reps};
}

DerivativeCheck derivative_identity_check(const TiltedSpec& spec, double h, long reps,
                                          double tau_hat, RandomStream& rng) {
  if (!(h >= 1e-4 && h <= 1e-2)) {
    throw DomainError("derivative_identity_check: h must lie in [1e-4, 1e-2]");
  }
  if (spec.dist == DistKind::Gaussian && operator_norm(spec.tilt) > 0.2) {
    throw DomainError("derivative_identity_check: Gaussian tilt weight unbounded");
  }
  if (reps < 10000) throw DomainError("derivative_identity_check: reps must be >= 10^4");

  const Matrix xi = draw_whitened_batch(spec.dist, spec.d, reps, rng);
  const Vector q_tilt = quadratic_forms(xi, spec.tilt);
  const Vector q_dir = quadratic_forms(xi, spec.direction);

  // log E exp(q_tilt + s q_dir) over a sample range, shift-stabilized
  const auto log_mgf = [&](double s, long begin, long end) {
    double shift = -1e300;
    for (long i = begin; i < end; ++i) shift = std::max(shift, q_tilt[i] + s * q_dir[i]);
    double sum = 0.0;
    for (long i = begin; i < end; ++i) {
      sum += std::exp(q_tilt[i] + s * q_dir[i] - shift);
    }
    return std::log(sum / static_cast<double>(end - begin)) + shift;
  };
  const auto second_difference = [&](long begin, long end) {
    return (log_mgf(h, begin, end) - 2.0 * log_mgf(0.0, begin, end) +
            log_mgf(-h, begin, end)) /
           (h * h);
  };

  DerivativeCheck check;
  check.h = h;
  check.second_difference = second_difference(0, reps);
  const TiltedAccumulator tilted = tilted_central_moment(q_tilt, q_dir, 2);
  check.tilted_second = tilted.point;

  std::vector<double> fd_batches;
  const long per_batch = reps / kBatches;
  for (int b = 0; b < kBatches; ++b) {
    const long begin = b * per_batch;
    const long end = (b == kBatches - 1) ? reps : begin + per_batch;
    fd_batches.push_back(second_difference(begin, end));
  }
  check.se_difference = batch_se(fd_batches);
  check.se_tilted = batch_se(tilted.batch_values);

  const double v_norm = std::sqrt(spec.direction.frobenius_sq());
  check.discrepancy = std::abs(check.second_difference - check.tilted_second);
  check.tolerance = 3.0 * (check.se_difference + check.se_tilted +
                           h * h * std::pow(tau_hat, 1.5) * std::pow(v_norm, 3));
  check.pass = check.discrepancy <= check.tolerance;
  return check;
}

KronCheckReport brute_kron_checks(long trials, RandomStream& rng) {
  if (trials < 1) throw DomainError("brute_kron_checks: trials must be >= 1");
  const auto unit_scaled = [&](int rows, int cols) {
    Matrix m(rows, cols);
    for (int j = 0; j < cols; ++j) {
      for (int i = 0; i < rows; ++i) m(i, j) = rng.gaussian();
    }
    const double norm = m.norm();
    if (norm > 0.0) m /= norm;
    return m;
  };
  const auto dim = [&]() { return 1 + static_cast<int>(rng.next_u32() % 4); };
  const auto sym_op_norm = [](const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    return es.eigenvalues().cwiseAbs().maxCoeff();
  };

  double max_residual = 0.0;
  const auto track = [&](double r) { max_residual = std::max(max_residual, r); };

  for (long t = 0; t < trials; ++t) {
    const int p = dim(), q = dim(), m = dim(), r = dim(), s = dim(), u = dim();
    const Matrix a = unit_scaled(p, q);
    const Matrix c = unit_scaled(q, m);
    const Matrix b = unit_scaled(r, s);
    const Matrix dmat = unit_scaled(s, u);

    track((kron(a, b) * kron(c, dmat) - kron(a * c, b * dmat))
              .cwiseAbs()
              .maxCoeff());

    const Matrix ga = unit_scaled(p, p);
    const Matrix gb = unit_scaled(r, r);
    const Matrix a_sym = 0.5 * (ga + ga.transpose());
    const Matrix b_sym = 0.5 * (gb + gb.transpose());
    const Matrix k_sym = kron(a_sym, b_sym);
    track(std::abs(k_sym.trace() - a_sym.trace() * b_sym.trace()));
    track(std::abs(k_sym.norm() - a_sym.norm() * b_sym.norm()));
    track(std::abs(sym_op_norm(k_sym) - sym_op_norm(a_sym) * sym_op_norm(b_sym)));

    const Matrix umat = unit_scaled(s, q);
    track((kron(a, b) * vectorize(umat) - vectorize(b * umat * a.transpose()))
              .cwiseAbs()
              .maxCoeff());

    const Matrix v = unit_scaled(r, p);
    const double bilinear = (v.transpose() * b * umat * a.transpose()).trace();
    const double through_kron =
        vectorize(v).dot(kron(a, b) * vectorize(umat));
    track(std::abs(bilinear - through_kron));
  }
  return {trials, max_residual, max_residual <= 1e-10};
}

namespace {

std::string format_estimate(const McEstimate& est) {
  std::ostringstream os;
  os << est.value << " +- " << est.std_error;
  return os.str();
}

}  // namespace

std::vector<VerifyResult> run_verify_suite(bool full, std::uint64_t seed) {
  std::vector<VerifyResult> results;
  const long scale = full ? 4 : 1;
  const auto record = [&](std::string name, bool pass, std::string detail) {
    results.push_back({std::move(name), pass, std::move(detail)});
  };

  {
    RandomStream rng(seed, 1);
    const KronCheckReport kron_report = brute_kron_checks(100 * scale, rng);
    std::ostringstream os;
    os << "max residual " << kron_report.max_residual;
    record("kronecker_identities", kron_report.pass, os.str());
  }

  const std::vector<DistKind> kinds = {DistKind::Gaussian, DistKind::TruncLaplace,
                                       DistKind::UniformSphere};
  for (DistKind kind : kinds) {
    RandomStream rng(seed, 2, static_cast<std::uint32_t>(kind));
    CovModel model = CovModel::make(0.5, 8, kind, rng);
    const long n = 25;
    const McEstimate mc = mc_mean_frob_error(model, n, 2000 * scale, rng);
    const double closed =
        static_cast<double>(n) * expected_frob_error(model, n).expected_frob_sq;
    const bool pass = std::abs(mc.value - closed) <= 3.0 * mc.std_error;
    std::ostringstream os;
    os << "mc " << format_estimate(mc) << " vs closed " << closed;
    record(std::string("mean_frob_closed_form_") + std::string(dist_name(kind)), pass,
           os.str());
  }

  for (DistKind kind : {DistKind::TruncLaplace, DistKind::UniformSphere}) {
    RandomStream rng(seed, 3, static_cast<std::uint32_t>(kind));
    const int d = 8;
    const McEstimate alpha = estimate_alpha(kind, d, 20000 * scale, 24, rng);
    const Spectrum lambda = lambda_profile(0.5, d);
    const SpectralFunctionals s(lambda);
    const auto [lo, hi] = mean_sandwich(s, alpha.value + 3.0 * alpha.std_error);
    const double closed =
        expected_frob_error(lambda, kind, 1).expected_frob_sq;
    const bool pass = closed >= lo - 1e-9 * std::abs(lo) - 1e-12 &&
                      closed <= hi + 1e-9 * std::abs(hi);
    std::ostringstream os;
    os << "m " << closed << " in [" << lo << ", " << hi << "], alpha_hat "
       << format_estimate(alpha);
    record(std::string("mean_sandwich_") + std::string(dist_name(kind)), pass, os.str());
  }

  for (DistKind kind : {DistKind::TruncLaplace, DistKind::UniformSphere}) {
    RandomStream rng(seed, 4, static_cast<std::uint32_t>(kind));
    const int d = 6;
    CovModel model = CovModel::make(0.5, d, kind, rng);
    const McEstimate alpha = estimate_alpha(kind, d, 20000 * scale, 24, rng);
    const SpectralFunctionals s(model.lambda);
    const VarianceBounds vb = variance_bounds(s, alpha.value);
    const McEstimate v_sq = mc_v_sq(model, 20000 * scale, rng);
    const McEstimate kappa = mc_kappa(model, 20000 * scale, 24, rng);
    const bool pass = v_sq.value <= vb.v_sq_hi + 3.0 * v_sq.std_error &&
                      kappa.value <= vb.kappa_hi + 3.0 * kappa.std_error;
    std::ostringstream os;
    os << "v_sq " << format_estimate(v_sq) << " <= " << vb.v_sq_hi << "; kappa "
       << format_estimate(kappa) << " <= " << vb.kappa_hi;
    record(std::string("variance_domination_") + std::string(dist_name(kind)), pass,
           os.str());
  }

  {
    RandomStream rng(seed, 5);
    const int d = 3;
    Matrix v = Matrix::Zero(d, d);
    v(0, 0) = 1.0;
    const TiltedSpec spec(SymMatrix(Matrix::Zero(d, d)), SymMatrix(v),
                          DistKind::TruncLaplace, 1.0);
    const long reps = 20000 * scale;
    const McEstimate second = tilted_moment(spec, 2, reps, rng);
    const McEstimate fourth = tilted_moment(spec, 4, reps, rng);
    // plain central moments of xi_1^2 for the unit-variance truncated
    // Laplace law, by quadrature
    const double sigma_sq = trunc_laplace_sigma_sq();
    const double kurt = trunc_laplace_kurtosis();
    const double plain_second = kurt - 1.0;  // E(xi^2/sigma^2 - 1)^2
    const bool pass_second =
        std::abs(second.value - plain_second) <= 3.0 * second.std_error + 1e-9;
    const bool pass_fourth = fourth.value >= 0.0 && second.value >= 0.0;
    std::ostringstream os;
    os << "tilted m2 " << format_estimate(second) << " vs plain " << plain_second
       << " (sigma_sq " << sigma_sq << ")";
    record("tilted_u0_reduction", pass_second && pass_fourth, os.str());
  }

  {
    RandomStream rng(seed, 6);
    bool all_pass = true;
    std::ostringstream os;
    for (DistKind kind : {DistKind::TruncLaplace, DistKind::UniformSphere}) {
      const McEstimate omega = estimate_omega(kind, 3, 20000 * scale, 16, rng);
      const auto [tau_hat, rho_hat] = tau_from_omega(std::max(omega.value, 1e-6));
      for (double h : {1e-3, 5e-3}) {
        const SymMatrix u(Matrix::Zero(3, 3));
        const TiltedSpec spec(u, random_unit_direction(3, rng), kind, rho_hat);
        const DerivativeCheck check =
            derivative_identity_check(spec, h, 20000 * scale, tau_hat, rng);
        all_pass = all_pass && check.pass;
      }
      os << dist_name(kind) << " ok; ";
    }
    record("derivative_identity_grid", all_pass, os.str());
  }

  {
    RandomStream rng_a(seed, 7);
    RandomStream rng_b(seed, 8);
    const McEstimate once = estimate_alpha(DistKind::TruncLaplace, 5, 10000 * scale, 16,
                                           rng_a);
    const McEstimate twice = estimate_alpha(DistKind::TruncLaplace, 5, 20000 * scale, 16,
                                            rng_b);
    const double combined = 3.0 * (once.std_error + twice.std_error);
    const bool pass = std::abs(once.value - twice.value) <= combined + 1e-12;
    std::ostringstream os;
    os << format_estimate(once) << " vs " << format_estimate(twice);
    record("alpha_stability_under_doubling", pass, os.str());
  }

  {
    RandomStream rng_a(seed, 9);
    RandomStream rng_b(seed, 9);
    CovModel model_a = CovModel::make(0.5, 5, DistKind::TruncLaplace, rng_a);
    CovModel model_b = CovModel::make(0.5, 5, DistKind::TruncLaplace, rng_b);
    const McEstimate a = mc_mean_frob_error(model_a, 10, 500, rng_a);
    const McEstimate b = mc_mean_frob_error(model_b, 10, 500, rng_b);
    const bool pass = a.value == b.value && a.std_error == b.std_error;
    record("oracle_determinism", pass,
           pass ? "bitwise identical replay" : "replay mismatch");
  }

  return results;
}

}  // namespace covlab
