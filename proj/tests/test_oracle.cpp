#include <doctest.h>

#include <cmath>

#include "covlab/moments.hpp"
#include "covlab/oracle.hpp"

using namespace covlab;

namespace {

SymMatrix basis_direction(int d, int i, int j) {
  Matrix m = Matrix::Zero(d, d);
  if (i == j) {
    m(i, i) = 1.0;
  } else {
    m(i, j) = m(j, i) = 1.0 / std::sqrt(2.0);
  }
  return SymMatrix(m);
}

}  // namespace

TEST_CASE("mc mean frobenius error: gaussian identity") {
  RandomStream rng(501);
  const CovModel model = CovModel::from_parts(haar_orthogonal(5, rng),
                                              lambda_profile(1.0, 5), DistKind::Gaussian);
  const McEstimate mc = mc_mean_frob_error(model, 10, 5000, rng);
  // n E ||.||^2 = (Tr S)^2 + Tr(S^2) = 25 + 5
  CHECK(std::abs(mc.value - 30.0) <= 3.0 * mc.std_error);
}

TEST_CASE("mc mean frobenius error: rank-one sphere model vs the hand formula") {
  // X = sqrt(d) u1 xi_1 with xi uniform on the sphere, so
  // n E ||Sigma_hat - Sigma||_F^2 = E (d xi_1^2 - 1)^2 = 3d/(d+2) - 1.
  RandomStream rng(502);
  for (int d : {1, 4, 7}) {
    std::vector<double> values(static_cast<std::size_t>(d), 0.0);
    values[0] = 1.0;
    const CovModel model = CovModel::from_parts(
        OrthMatrix(Matrix::Identity(d, d)), Spectrum(values), DistKind::UniformSphere);
    const double hand = 3.0 * d / (d + 2.0) - 1.0;
    const McEstimate mc = mc_mean_frob_error(model, 20, 3000, rng);
    if (d == 1) {
      CHECK(mc.value == 0.0);  // degenerate +-1 ensemble estimates exactly
      CHECK(hand == doctest::Approx(0.0).epsilon(1e-14));
    } else {
      CHECK(std::abs(mc.value - hand) <= 3.0 * mc.std_error);
    }
    CHECK(hand == doctest::Approx(expected_frob_error(model, 1).expected_frob_sq)
                      .epsilon(1e-12));
  }
}

TEST_CASE("mc mean frobenius error agrees with the truncated laplace closed form") {
  RandomStream rng(503);
  const CovModel model = CovModel::make(0.5, 10, DistKind::TruncLaplace, rng);
  const long n = 20;
  const McEstimate mc = mc_mean_frob_error(model, n, 3000, rng);
  const double closed =
      static_cast<double>(n) * expected_frob_error(model, n).expected_frob_sq;
  CHECK(std::abs(mc.value - closed) <= 3.0 * mc.std_error);
}

TEST_CASE("alpha estimate") {
  SUBCASE("gaussian: the e1 e1^T direction contributes sqrt(60)") {
    RandomStream rng(504);
    const McEstimate alpha = estimate_alpha(DistKind::Gaussian, 3, 60000, 16, rng);
    const double target = std::sqrt(60.0);
    CHECK(alpha.value >= target * 0.9);
    CHECK(alpha.value <= target * 1.35);
  }

  SUBCASE("uniform sphere at d = 1 is degenerate") {
    RandomStream rng(505);
    const McEstimate alpha = estimate_alpha(DistKind::UniformSphere, 1, 10000, 16, rng);
    CHECK(alpha.value <= 1e-12);  // xi^T V xi is constant, up to summation dust
  }

  SUBCASE("stable under doubling the replicate count") {
    RandomStream rng_a(506);
    RandomStream rng_b(507);
    const McEstimate once = estimate_alpha(DistKind::TruncLaplace, 4, 20000, 16, rng_a);
    const McEstimate twice = estimate_alpha(DistKind::TruncLaplace, 4, 40000, 16, rng_b);
    CHECK(std::abs(once.value - twice.value) <=
          3.0 * (once.std_error + twice.std_error) + 1e-9);
  }
}

TEST_CASE("v^2 estimate") {
  SUBCASE("scalar gaussian value is 4") {
    RandomStream rng(508);
    std::vector<double> one{1.0};
    const CovModel model = CovModel::from_parts(OrthMatrix(Matrix::Identity(1, 1)),
                                                Spectrum(one), DistKind::Gaussian);
    const McEstimate v_sq = mc_v_sq(model, 200000, rng);
    CHECK(std::abs(v_sq.value - 4.0) <= 3.0 * v_sq.std_error + 0.05);
  }

  SUBCASE("dominated by the moment bound with the estimated alpha") {
    RandomStream rng(509);
    const CovModel model = CovModel::make(0.5, 6, DistKind::TruncLaplace, rng);
    const McEstimate alpha = estimate_alpha(DistKind::TruncLaplace, 6, 20000, 16, rng);
    const McEstimate v_sq = mc_v_sq(model, 20000, rng);
    const VarianceBounds vb = variance_bounds(model.lambda, alpha.value);
    CHECK(v_sq.value <= vb.v_sq_hi + 3.0 * v_sq.std_error);
  }

  SUBCASE("upward bias shrinks with more replicates") {
    RandomStream rng_a(510);
    RandomStream rng_b(511);
    std::vector<double> one{1.0};
    const CovModel model = CovModel::from_parts(OrthMatrix(Matrix::Identity(1, 1)),
                                                Spectrum(one), DistKind::Gaussian);
    const McEstimate coarse = mc_v_sq(model, 10000, rng_a);
    const McEstimate fine = mc_v_sq(model, 80000, rng_b);
    CHECK(fine.value <= coarse.value + 1.0 * (coarse.std_error + fine.std_error));
  }

  SUBCASE("dimension cap") {
    RandomStream rng(512);
    const CovModel model = CovModel::make(0.5, 13, DistKind::Gaussian, rng);
    CHECK_THROWS_AS(mc_v_sq(model, 10000, rng), SizeError);
  }
}

TEST_CASE("kappa estimate") {
  SUBCASE("scalar case is a single direction") {
    RandomStream rng(513);
    std::vector<double> one{1.0};
    const CovModel model = CovModel::from_parts(OrthMatrix(Matrix::Identity(1, 1)),
                                                Spectrum(one), DistKind::Gaussian);
    const McEstimate kappa = mc_kappa(model, 100000, 10, rng);
    // E (X^2 - 1)^2 = 2 for the scalar gaussian
    CHECK(std::abs(kappa.value - 2.0) <= 3.0 * kappa.std_error + 0.02);
  }

  SUBCASE("gaussian identity with the normalized trace direction") {
    RandomStream rng(514);
    const CovModel model = CovModel::from_parts(
        OrthMatrix(Matrix::Identity(4, 4)), lambda_profile(1.0, 4), DistKind::Gaussian);
    const McEstimate kappa = mc_kappa(model, 80000, 12, rng);
    // the sweep includes U = I/sqrt(d): E (||X||^2 - d)^2 / d = 2
    CHECK(kappa.value >= 2.0 - 3.0 * kappa.std_error - 0.05);
  }

  SUBCASE("dominated by alpha ||Sigma||^2") {
    RandomStream rng(515);
    const CovModel model = CovModel::make(0.4, 5, DistKind::UniformSphere, rng);
    const McEstimate alpha = estimate_alpha(DistKind::UniformSphere, 5, 20000, 16, rng);
    const McEstimate kappa = mc_kappa(model, 20000, 16, rng);
    const VarianceBounds vb = variance_bounds(model.lambda, alpha.value);
    CHECK(kappa.value <= vb.kappa_hi + 3.0 * kappa.std_error);
  }
}

TEST_CASE("tilted moments") {
  SUBCASE("zero tilt reduces to plain central moments") {
    RandomStream rng(516);
    const int d = 3;
    const TiltedSpec spec(SymMatrix(Matrix::Zero(d, d)), basis_direction(d, 0, 0),
                          DistKind::TruncLaplace, 1.0);
    const McEstimate second = tilted_moment(spec, 2, 40000, rng);
    const double kurt = trunc_laplace_kurtosis();
    CHECK(std::abs(second.value - (kurt - 1.0)) <= 3.0 * second.std_error);
  }

  SUBCASE("second moment is nonnegative and flipping V changes nothing") {
    RandomStream rng(517);
    const int d = 4;
    SymMatrix tilt = basis_direction(d, 0, 1);
    Matrix scaled = 0.05 * tilt.entries();
    SymMatrix v = basis_direction(d, 1, 2);
    const TiltedSpec plus(SymMatrix(scaled), v, DistKind::UniformSphere, 1.0);
    const TiltedSpec minus(SymMatrix(scaled), SymMatrix(-v.entries()),
                           DistKind::UniformSphere, 1.0);
    RandomStream rng_a(518);
    RandomStream rng_b(518);
    const McEstimate a = tilted_moment(plus, 2, 20000, rng_a);
    const McEstimate b = tilted_moment(minus, 2, 20000, rng_b);
    CHECK(a.value >= 0.0);
    CHECK(a.value == b.value);  // (q - mu) flips sign, the square does not
  }

  SUBCASE("fourth tilted moment respects the assumption sweep") {
    RandomStream rng(519);
    const int d = 3;
    const McEstimate omega = estimate_omega(DistKind::TruncLaplace, d, 30000, 16, rng);
    const auto [tau_hat, rho_hat] = tau_from_omega(omega.value);
    const TiltedSpec spec(SymMatrix(Matrix::Zero(d, d)), basis_direction(d, 0, 0),
                          DistKind::TruncLaplace, rho_hat);
    const McEstimate fourth = tilted_moment(spec, 4, 30000, rng);
    CHECK(fourth.value <= tau_hat * tau_hat + 3.0 * fourth.std_error);
  }

  SUBCASE("gaussian tilt with a large matrix is refused") {
    RandomStream rng(520);
    const int d = 3;
    const TiltedSpec spec(SymMatrix(Matrix::Identity(d, d)), basis_direction(d, 0, 0),
                          DistKind::Gaussian, 10.0);
    CHECK_THROWS_AS(tilted_moment(spec, 2, 10000, rng), DomainError);
  }

  SUBCASE("guards") {
    const int d = 2;
    CHECK_THROWS_AS(TiltedSpec(SymMatrix(Matrix::Identity(d, d)),
                               basis_direction(d, 0, 0), DistKind::TruncLaplace, 0.5),
                    DomainError);  // ||U||_F = sqrt(2) > rho_max
    CHECK_THROWS_AS(TiltedSpec(SymMatrix(Matrix::Zero(d, d)),
                               SymMatrix(Matrix::Zero(d, d)), DistKind::TruncLaplace,
                               1.0),
                    DomainError);  // zero direction
    RandomStream rng(521);
    const TiltedSpec ok(SymMatrix(Matrix::Zero(d, d)), basis_direction(d, 0, 0),
                        DistKind::TruncLaplace, 1.0);
    CHECK_THROWS_AS(tilted_moment(ok, 5, 10000, rng), DomainError);
  }
}

TEST_CASE("derivative identity holds on a (direction, step) grid") {
  for (DistKind kind : {DistKind::TruncLaplace, DistKind::UniformSphere}) {
    RandomStream rng(522, static_cast<std::uint32_t>(kind));
    const int d = 3;
    const McEstimate omega = estimate_omega(kind, d, 20000, 12, rng);
    const auto [tau_hat, rho_hat] = tau_from_omega(std::max(omega.value, 0.05));
    const std::vector<SymMatrix> directions = {
        basis_direction(d, 0, 0), basis_direction(d, 0, 1), basis_direction(d, 1, 2)};
    for (const SymMatrix& v : directions) {
      for (double h : {1e-3, 3e-3, 1e-2}) {
        const TiltedSpec spec(SymMatrix(Matrix::Zero(d, d)), v, kind, rho_hat);
        const DerivativeCheck check =
            derivative_identity_check(spec, h, 30000, tau_hat, rng);
        CHECK(check.pass);
      }
    }
  }
}

TEST_CASE("brute kron checks") {
  RandomStream rng(523);
  const KronCheckReport report = brute_kron_checks(100, rng);
  CHECK(report.pass);

  // rectangular mixed product at fixed shapes
  RandomStream rng2(524);
  Matrix a(2, 3), b(3, 2), c(3, 2), d(2, 3);
  for (auto* m : {&a, &b, &c, &d}) {
    for (Eigen::Index j = 0; j < m->cols(); ++j) {
      for (Eigen::Index i = 0; i < m->rows(); ++i) (*m)(i, j) = rng2.gaussian();
    }
    *m /= m->norm();
  }
  const double residual =
      (kron(a, b) * kron(c, d) - kron(a * c, b * d)).cwiseAbs().maxCoeff();
  CHECK(residual <= 1e-12);
}

TEST_CASE("oracles replay deterministically") {
  RandomStream rng_a(525);
  RandomStream rng_b(525);
  const CovModel model_a = CovModel::make(0.5, 4, DistKind::UniformSphere, rng_a);
  const CovModel model_b = CovModel::make(0.5, 4, DistKind::UniformSphere, rng_b);
  const McEstimate a = mc_mean_frob_error(model_a, 15, 300, rng_a);
  const McEstimate b = mc_mean_frob_error(model_b, 15, 300, rng_b);
  CHECK(a.value == b.value);
  CHECK(a.std_error == b.std_error);
}

TEST_CASE("verify suite passes at quick scale") {
  const std::vector<VerifyResult> results = run_verify_suite(false, 12345);
  CHECK(!results.empty());
  for (const VerifyResult& r : results) {
    INFO(r.name, ": ", r.detail);
    CHECK(r.pass);
  }
}
