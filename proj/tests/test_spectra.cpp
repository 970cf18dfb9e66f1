#include <doctest.h>

#include <cmath>

#include "covlab/spectra.hpp"

using namespace covlab;

TEST_CASE("lambda_profile endpoints") {
  const Spectrum at_zero = lambda_profile(0.0, 50);
  CHECK(at_zero[0] == 1.0);
  for (int k = 1; k < 50; ++k) CHECK(at_zero[k] == 0.0);
  CHECK(effective_rank(at_zero) == 1.0);

  const Spectrum at_one = lambda_profile(1.0, 50);
  for (int k = 0; k < 50; ++k) CHECK(at_one[k] == 1.0);
  CHECK(effective_rank(at_one) == 50.0);
}

TEST_CASE("both branch formulas agree at t = 1/2") {
  const int d = 50;
  const Spectrum assigned = lambda_profile(0.5, d);  // first branch by convention
  for (int k = 1; k < d; ++k) {
    const double linear = 2.0 * 0.5 * (static_cast<double>(d - k) / d);
    const double power = std::pow(static_cast<double>(d - k) / d, 2.0 * (1.0 - 0.5));
    CHECK(assigned[k] == doctest::Approx(linear).epsilon(1e-15));
    CHECK(assigned[k] == doctest::Approx(power).epsilon(1e-15));
  }
}

TEST_CASE("branch continuity near the switch point") {
  const int d = 50;
  const double eps = 1e-9;
  const Spectrum below = lambda_profile(0.5 - eps, d);
  const Spectrum above = lambda_profile(0.5 + eps, d);
  for (int k = 0; k < d; ++k) {
    CHECK(std::abs(below[k] - above[k]) <= 1e-7);
  }
}

TEST_CASE("spectrum entries stay inside [0, 1]") {
  for (double t : parameter_grid(21)) {
    for (int d : {2, 5, 50}) {
      const Spectrum lambda = lambda_profile(t, d);
      for (int k = 0; k < d; ++k) {
        CHECK(lambda[k] >= 0.0);
        CHECK(lambda[k] <= 1.0);
      }
    }
  }
}

TEST_CASE("effective rank is nondecreasing over the default grid and spans [1, d]") {
  const int d = 50;
  double previous = 0.0;
  const std::vector<double> grid = parameter_grid();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = effective_rank(lambda_profile(grid[i], d));
    CHECK(r >= previous - 1e-12);
    previous = r;
  }
  CHECK(effective_rank(lambda_profile(grid.front(), d)) == 1.0);
  CHECK(effective_rank(lambda_profile(grid.back(), d)) == 50.0);
}

TEST_CASE("parameter_grid") {
  const std::vector<double> two = parameter_grid(2);
  CHECK(two.size() == 2);
  CHECK(two[0] == 0.0);
  CHECK(two[1] == 1.0);

  const std::vector<double> seventy = parameter_grid(70);
  CHECK(seventy.size() == 70);
  CHECK(seventy[1] == doctest::Approx(1.0 / 69.0).epsilon(1e-15));
  CHECK(seventy.back() == 1.0);

  CHECK_THROWS_AS(parameter_grid(1), DomainError);
  CHECK_THROWS_AS(lambda_profile(-0.1, 10), DomainError);
  CHECK_THROWS_AS(lambda_profile(1.1, 10), DomainError);
  CHECK_THROWS_AS(lambda_profile(0.5, 1), DomainError);
}

TEST_CASE("build_cov") {
  RandomStream rng(2024);

  SUBCASE("t = 1 gives the identity covariance for any factor") {
    const CovModel model = CovModel::make(1.0, 12, DistKind::Gaussian, rng);
    CHECK((model.sigma.entries() - Matrix::Identity(12, 12)).norm() <= 1e-10);
  }

  SUBCASE("t = 0 gives the rank-one projector onto the first column") {
    const CovModel model = CovModel::make(0.0, 8, DistKind::TruncLaplace, rng);
    const Vector u1 = model.u.entries().col(0);
    CHECK((model.sigma.entries() - u1 * u1.transpose()).norm() <= 1e-10);
    CHECK(model.sigma.trace() == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("trace is similarity invariant") {
    for (double t : {0.2, 0.5, 0.9}) {
      const CovModel model = CovModel::make(t, 15, DistKind::UniformSphere, rng);
      CHECK(model.sigma.trace() ==
            doctest::Approx(model.lambda.trace()).epsilon(1e-10));
    }
  }

  SUBCASE("cached covariance matches its factorization") {
    const CovModel model = CovModel::make(0.37, 9, DistKind::Gaussian, rng);
    Vector diag(9);
    for (int i = 0; i < 9; ++i) diag[i] = model.lambda[i];
    const Matrix rebuilt =
        model.u.entries() * diag.asDiagonal() * model.u.entries().transpose();
    CHECK((model.sigma.entries() - rebuilt).norm() <= 1e-10);
  }
}
