#include "covlab/spectra.hpp"

#include <cmath>

namespace covlab {

std::optional<DistKind> dist_from_name(std::string_view name) {
  if (name == "trunc_laplace") return DistKind::TruncLaplace;
  if (name == "uniform_sphere") return DistKind::UniformSphere;
  if (name == "gaussian") return DistKind::Gaussian;
  return std::nullopt;
}

Spectrum lambda_profile(double t, int d) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("lambda_profile: t must lie in [0, 1]");
  if (d < 2) throw DomainError("lambda_profile: d must be >= 2");
  std::vector<double> values(static_cast<std::size_t>(d));
  values[0] = 1.0;
  if (t <= 0.5) {
    for (int k = 1; k < d; ++k) {
      values[static_cast<std::size_t>(k)] = 2.0 * t * (static_cast<double>(d - k) / d);
    }
  } else {
    const double exponent = 2.0 * (1.0 - t);
    for (int k = 1; k < d; ++k) {
      values[static_cast<std::size_t>(k)] =
          std::pow(static_cast<double>(d - k) / d, exponent);
    }
  }
  return Spectrum(std::move(values));
}

std::vector<double> parameter_grid(int count) {
  if (count < 2) throw DomainError("parameter_grid: count must be >= 2");
  std::vector<double> grid(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    grid[static_cast<std::size_t>(k)] = static_cast<double>(k) / (count - 1);
  }
  return grid;
}

CovModel CovModel::from_parts(OrthMatrix u, Spectrum lambda, DistKind dist) {
  if (u.dim() != lambda.dim()) {
    throw DomainError("CovModel: orthogonal factor and spectrum dimensions differ");
  }
  Vector diag(lambda.dim());
  for (int i = 0; i < lambda.dim(); ++i) diag[i] = lambda[i];
  SymMatrix sigma(u.entries() * diag.asDiagonal() * u.entries().transpose());
  return CovModel{std::move(u), std::move(lambda), dist, std::move(sigma)};
}

CovModel CovModel::make(double t, int d, DistKind dist, RandomStream& rng) {
  return from_parts(haar_orthogonal(d, rng), lambda_profile(t, d), dist);
}

}  // namespace covlab
