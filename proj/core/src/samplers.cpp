#include "covlab/samplers.hpp"

#include <cmath>

#include "covlab/quadrature.hpp"

namespace covlab {
namespace {

constexpr double kCut = 6.0;
// mass of e^{-|x|} on [-6, 6]
const double kMass = 2.0 * (1.0 - std::exp(-kCut));

// int_0^6 x^2 e^{-x} dx via the antiderivative -(x^2 + 2x + 2) e^{-x}
double moment2_half_closed() { return 2.0 - 50.0 * std::exp(-kCut); }

// int_0^6 x^4 e^{-x} dx via -(x^4 + 4x^3 + 12x^2 + 24x + 24) e^{-x}
double moment4_half_closed() { return 24.0 - 2760.0 * std::exp(-kCut); }

double checked_dual_route(double closed, double by_quadrature, double rel_tol,
                          const char* label) {
  const double rel = std::abs(closed - by_quadrature) / std::abs(closed);
  if (!(rel <= rel_tol)) {
    throw NumericError(std::string(label) + ": quadrature and antiderivative disagree",
                       0, rel);
  }
  return closed;
}

}  // namespace

double trunc_laplace_quantile(double u) {
  if (!(u >= 0.0 && u <= 1.0)) throw DomainError("trunc_laplace_quantile: u outside [0, 1]");
  const double scale = 1.0 - std::exp(-kCut);
  if (u >= 0.5) {
    return -std::log1p(-(2.0 * u - 1.0) * scale);
  }
  return std::log1p(-(1.0 - 2.0 * u) * scale);
}

double trunc_laplace_cdf(double x) {
  if (x <= -kCut) return 0.0;
  if (x >= kCut) return 1.0;
  if (x < 0.0) {
    return (std::exp(x) - std::exp(-kCut)) / kMass;
  }
  return 0.5 + (1.0 - std::exp(-x)) / kMass;
}

double trunc_laplace_scalar(RandomStream& rng) {
  return trunc_laplace_quantile(rng.uniform01());
}

double trunc_laplace_sigma_sq() {
  static const double value = [] {
    const double closed = 2.0 * moment2_half_closed() / kMass;
    const double quad = adaptive_quadrature(
        [](double x) { return x * x * std::exp(-std::abs(x)) / kMass; }, -kCut, kCut,
        1e-13);
    return checked_dual_route(closed, quad, 1e-12, "trunc_laplace_sigma_sq");
  }();
  return value;
}

double trunc_laplace_kurtosis() {
  static const double value = [] {
    const double sigma_sq = trunc_laplace_sigma_sq();
    const double closed = 2.0 * moment4_half_closed() / kMass / (sigma_sq * sigma_sq);
    const double quad = adaptive_quadrature(
                            [](double x) {
                              const double x2 = x * x;
                              return x2 * x2 * std::exp(-std::abs(x)) / kMass;
                            },
                            -kCut, kCut, 1e-13) /
                        (sigma_sq * sigma_sq);
    return checked_dual_route(closed, quad, 1e-9, "trunc_laplace_kurtosis");
  }();
  return value;
}

Vector sample_sphere(int d, RandomStream& rng) {
  if (d < 1) throw DomainError("sample_sphere: d must be >= 1");
  Vector v(d);
  double norm_sq = 0.0;
  do {
    for (int i = 0; i < d; ++i) v[i] = rng.gaussian();
    norm_sq = v.squaredNorm();
  } while (!(norm_sq > 0.0));  // an all-zero draw has probability zero
  return v / std::sqrt(norm_sq);
}

void whitened_xi(DistKind kind, int d, RandomStream& rng, double* out) {
  switch (kind) {
    case DistKind::TruncLaplace: {
      const double inv_sigma = 1.0 / std::sqrt(trunc_laplace_sigma_sq());
      for (int i = 0; i < d; ++i) out[i] = inv_sigma * trunc_laplace_scalar(rng);
      return;
    }
    case DistKind::UniformSphere: {
      double norm_sq = 0.0;
      do {
        norm_sq = 0.0;
        for (int i = 0; i < d; ++i) {
          out[i] = rng.gaussian();
          norm_sq += out[i] * out[i];
        }
      } while (!(norm_sq > 0.0));
      const double scale = std::sqrt(static_cast<double>(d) / norm_sq);
      for (int i = 0; i < d; ++i) out[i] *= scale;
      return;
    }
    case DistKind::Gaussian: {
      for (int i = 0; i < d; ++i) out[i] = rng.gaussian();
      return;
    }
  }
  throw DomainError("whitened_xi: unknown distribution kind");
}

Vector whitened_xi(DistKind kind, int d, RandomStream& rng) {
  Vector out(d);
  whitened_xi(kind, d, rng, out.data());
  return out;
}

SampleBatch draw_observations(const CovModel& model, long n, RandomStream& rng) {
  if (n < 1) throw DomainError("draw_observations: n must be >= 1");
  const int d = model.dim();
  Vector sqrt_lambda(d);
  for (int i = 0; i < d; ++i) sqrt_lambda[i] = std::sqrt(model.lambda[i]);
  const Matrix factor = model.u.entries() * sqrt_lambda.asDiagonal();

  SampleBatch batch{n, d, Matrix(n, d)};
  Vector xi(d);
  for (long i = 0; i < n; ++i) {
    whitened_xi(model.dist, d, rng, xi.data());
    batch.rows.row(i) = (factor * xi).transpose();
  }
  return batch;
}

SymMatrix sample_covariance(const SampleBatch& batch) {
  if (batch.n < 1 || batch.rows.rows() != batch.n || batch.rows.cols() != batch.d) {
    throw DomainError("sample_covariance: malformed batch");
  }
  Matrix second_moment =
      (batch.rows.transpose() * batch.rows) / static_cast<double>(batch.n);
  return SymMatrix(std::move(second_moment));
}

}  // namespace covlab
