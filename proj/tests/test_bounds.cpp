#include <doctest.h>

#include <cmath>
#include <numbers>

#include "covlab/bounds.hpp"
#include "covlab/spectra.hpp"

using namespace covlab;

namespace {

constexpr double kE = std::numbers::e;

Spectrum identity_spectrum(int d) {
  return Spectrum(std::vector<double>(static_cast<std::size_t>(d), 1.0));
}

Spectrum rank_one(double head = 1.0, int d = 4) {
  std::vector<double> values(static_cast<std::size_t>(d), 0.0);
  values[0] = head;
  return Spectrum(values);
}

Spectrum random_spectrum(int d, RandomStream& rng) {
  std::vector<double> values;
  for (int i = 0; i < d; ++i) values.push_back(0.05 + 3.0 * rng.uniform01());
  std::sort(values.begin(), values.end(), std::greater<double>());
  return Spectrum(values);
}

}  // namespace

TEST_CASE("tau_from_omega") {
  const auto [tau1, rho1] = tau_from_omega(1.0);
  CHECK(tau1 == 64.0);
  CHECK(rho1 == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  const auto [tau2, rho2] = tau_from_omega(0.125);
  CHECK(tau2 == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(rho2 == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  const auto [tau3, rho3] = tau_from_omega(2.0);
  CHECK(tau3 == 256.0);
  CHECK(rho3 == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
  CHECK_THROWS_AS(tau_from_omega(0.0), DomainError);

  const TailParams params = TailParams::from_omega(0.5, 2.0, 0.1, 100);
  CHECK(params.tau == 64.0 * 0.25);
  CHECK(params.rho_max == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK_THROWS_AS(TailParams::direct(1.0, 1.0, 1.0, 1.5, 10), DomainError);
  CHECK_THROWS_AS(TailParams::direct(1.0, 1.0, -1.0, 0.5, 10), DomainError);
}

TEST_CASE("admissibility radius plug-ins") {
  const int d = 10;
  // delta = 2/e makes log(2/delta) = 1
  const double at_identity = admissibility_radius(identity_spectrum(d), 1.0, 2.0 / kE);
  CHECK(at_identity ==
        doctest::Approx(2.0 * d + 0.5 * std::sqrt(static_cast<double>(d)) +
                        2.0 * std::sqrt(kE))
            .epsilon(1e-14));

  const double at_rank_one = admissibility_radius(rank_one(), 4.0, 0.5);
  CHECK(at_rank_one ==
        doctest::Approx(2.0 + 1.0 + 2.0 * std::sqrt(kE * std::log(4.0))).epsilon(1e-14));

  double previous = 0.0;
  for (double delta : {0.5, 0.1, 0.01, 0.001}) {
    const double current = admissibility_radius(identity_spectrum(3), 2.0, delta);
    CHECK(current >= previous);
    previous = current;
  }
}

TEST_CASE("upper admissibility") {
  const Spectrum spec = identity_spectrum(50);

  SUBCASE("huge n passes") {
    const AdmissibilityCheck check = upper_admissible(spec, 64.0, 1.0 / 6.0, 0.05,
                                                      4000000000000000L);
    CHECK(check.ok);
    CHECK(check.margin1 > 0.0);
    CHECK(check.margin2 > 0.0);
  }

  SUBCASE("n = 1 fails") {
    const AdmissibilityCheck check = upper_admissible(spec, 64.0, 1.0 / 6.0, 0.05, 1);
    CHECK_FALSE(check.ok);
    CHECK(check.margin2 < 0.0);
  }

  SUBCASE("ceiling of the binding constraint is admissible with a small margin") {
    const double tau = 2.0;
    const double rho_max = 0.5;
    const double delta = 0.1;
    const Spectrum small = identity_spectrum(3);
    const SpectralFunctionals s(small);
    const double radius = admissibility_radius(s, tau, delta);
    const double need1 = std::pow(s.op_norm * radius / rho_max, 2.0);
    const double need2 = s.r1() * s.r1() * radius * radius *
                         (tau * tau * tau * radius * radius / 4.0 + 3.0 * tau * tau) /
                         36.0;
    const long n = static_cast<long>(std::ceil(std::max(need1, need2)));
    const AdmissibilityCheck check = upper_admissible(small, tau, rho_max, delta, n);
    CHECK(check.ok);
    CHECK(std::min(check.margin1, check.margin2) >= 0.0);
    CHECK(std::min(check.margin1, check.margin2) <= 1e-2);
  }
}

TEST_CASE("upper deviation bound") {
  SUBCASE("positive as delta approaches one") {
    const double bound = upper_deviation_bound(identity_spectrum(4), 1.0, 0.999999, 100);
    CHECK(bound > 0.0);
  }

  SUBCASE("identity plug-in at log(2/delta) = 1") {
    const int d = 6;
    const long n = 37;
    const double bound = upper_deviation_bound(identity_spectrum(d), 1.0, 2.0 / kE, n);
    const double expected =
        4.0 / n * std::max(std::sqrt(2.0 * (d * d + d)), 4.0 * kE);
    CHECK(bound == doctest::Approx(expected).epsilon(1e-14));
  }

  SUBCASE("scaling the spectrum scales the bound quadratically") {
    RandomStream rng(401);
    const Spectrum spec = random_spectrum(7, rng);
    std::vector<double> scaled_values;
    for (double v : spec.values()) scaled_values.push_back(2.5 * v);
    const Spectrum scaled(scaled_values);
    const double base = upper_deviation_bound(spec, 3.0, 0.1, 50);
    const double big = upper_deviation_bound(scaled, 3.0, 0.1, 50);
    CHECK(big == doctest::Approx(2.5 * 2.5 * base).epsilon(1e-12));
  }
}

TEST_CASE("lower admissibility thresholds for the rank-one spectrum") {
  const Spectrum spec = rank_one();
  // with alpha = 1 the two thresholds are 7 * 1 * 2 = 14 and 96 * 4 * 2 = 768
  CHECK(lower_admissible(spec, 1.0, 768).ok);
  CHECK_FALSE(lower_admissible(spec, 1.0, 767).ok);
  CHECK(lower_admissible(spec, 1.0, 767).margin2 < 0.0);
  CHECK(lower_admissible(spec, 1.0, 14).margin1 >= 0.0);
  CHECK_FALSE(lower_admissible(spec, 1.0, 13).margin1 >= 0.0);

  // identity at d = 50: threshold near 4.9e7 rejects n = 1e6
  const AdmissibilityCheck big = lower_admissible(identity_spectrum(50), 1.0, 1000000);
  CHECK_FALSE(big.ok);
}

TEST_CASE("lower variance factor") {
  SUBCASE("rank one tends to 2") {
    const double value = lower_variance_factor(rank_one(), 1.0, 4000000000000000L);
    CHECK(value == doctest::Approx(2.0).epsilon(1e-12));
  }

  SUBCASE("identity with finite-n correction") {
    const int d = 8;
    const long n = 123;
    const double value = lower_variance_factor(identity_spectrum(d), 1.0, n);
    const double infinite =
        static_cast<double>(d) * d + d;  // alpha r2^2 + alpha^2 r4 at the identity
    const double correction =
        15.0 * d * d * d * (static_cast<double>(d) * d + d) / (4.0 * n);
    CHECK(value == doctest::Approx(infinite + correction).epsilon(1e-12));
  }
}

TEST_CASE("lower deviation bound") {
  SUBCASE("direct plug-in against the displayed max") {
    const Spectrum spec = identity_spectrum(5);
    const long n = 11;
    const double log_term = std::log(5.0 / 0.25);
    const double factor = lower_variance_factor(spec, 1.0, n);
    const double expected =
        4.0 / n * std::max(2.0 * log_term, std::sqrt(2.0 * factor * log_term));
    CHECK(lower_deviation_bound(spec, 1.0, 0.25, n) ==
          doctest::Approx(expected).epsilon(1e-14));
  }

  SUBCASE("rank one with large n") {
    const double head = 1.7;
    const Spectrum spec = rank_one(head);
    const long n = 1000000000L;
    const double delta = 0.2;
    const double log_term = std::log(5.0 / delta);
    const double value = lower_deviation_bound(spec, 1.0, delta, n);
    const double expected = 4.0 * head * head / static_cast<double>(n) *
                            std::max(2.0 * log_term, std::sqrt(4.0 * log_term));
    CHECK(value == doctest::Approx(expected).epsilon(1e-6));
  }

  SUBCASE("nonincreasing in n") {
    const Spectrum spec = identity_spectrum(6);
    double previous = 1e300;
    for (long n : {10L, 100L, 1000L, 10000L}) {
      const double value = lower_deviation_bound(spec, 2.0, 0.1, n);
      CHECK(value <= previous);
      previous = value;
    }
  }
}

TEST_CASE("ratio deviation") {
  SUBCASE("identity plug-in") {
    const int d = 12;
    const double delta = 0.07;
    const double log_term = std::log(7.0 / delta);
    const RatioBound bound = ratio_deviation(identity_spectrum(d), delta);
    const double expected =
        std::max(d * std::sqrt(log_term), log_term) / (static_cast<double>(d) * d - d);
    CHECK(bound.primary == doctest::Approx(expected).epsilon(1e-14));
  }

  SUBCASE("envelope dominates the sharp form") {
    RandomStream rng(402);
    for (int trial = 0; trial < 100; ++trial) {
      const Spectrum spec = random_spectrum(3 + static_cast<int>(rng.next_u32() % 20),
                                            rng);
      const RatioBound bound = ratio_deviation(spec, 0.05);
      CHECK(bound.envelope >= bound.primary * (1.0 - 1e-12));
    }
  }

  SUBCASE("vanishes as the effective rank grows") {
    double previous = 1e300;
    for (int d : {5, 50, 500}) {
      const double value = ratio_deviation(identity_spectrum(d), 0.05).primary;
      CHECK(value < previous);
      previous = value;
    }
    CHECK(previous < 1e-2);
  }

  SUBCASE("rank-one spectrum is out of domain") {
    CHECK_THROWS_AS(ratio_deviation(rank_one(), 0.05), DomainError);
  }
}

TEST_CASE("peeling series g") {
  SUBCASE("value at 4 e log 2") {
    const double u = 4.0 * kE * std::log(2.0);
    CHECK(g_series(u) <= 1.1);
    CHECK(g_series(u) > 1.0);
  }

  SUBCASE("tends to 1 from above") {
    CHECK(g_series(1000.0) == doctest::Approx(1.0).epsilon(1e-15));
  }

  SUBCASE("nonincreasing on a log-spaced grid") {
    double previous = 1e300;
    for (double u = 0.1; u <= 100.0; u *= 1.3) {
      const double value = g_series(u);
      CHECK(value <= previous + 1e-15);
      previous = value;
    }
  }

  SUBCASE("tail certificate") {
    for (double u : {0.1, 1.0, 7.5372, 50.0}) {
      CHECK(g_series_with_tail(u).tail_bound < 1e-15);
    }
  }

  SUBCASE("domain guard") {
    CHECK_THROWS_AS(g_series(0.0), DomainError);
    CHECK_THROWS_AS(g_series(-1.0), DomainError);
  }
}

TEST_CASE("curvature factor G") {
  const Spectrum spec = identity_spectrum(5);

  SUBCASE("vanishes with lambda") {
    double previous = 1e300;
    for (double lambda : {1e-2, 1e-4, 1e-6, 1e-8}) {
      const double value = curvature_factor(lambda, 3.0, spec, 2.0, 100);
      CHECK(value < previous);
      previous = value;
    }
    CHECK(previous < 1e-12);
  }

  SUBCASE("peeling monotonicity") {
    RandomStream rng(403);
    for (int trial = 0; trial < 50; ++trial) {
      const Spectrum s = random_spectrum(6, rng);
      const SpectralFunctionals f(s);
      const double lambda = 0.01 + rng.uniform01();
      const double z = 0.5 + 3.0 * rng.uniform01();
      const double tau = 0.5 + 5.0 * rng.uniform01();
      const double base = curvature_factor(lambda, z * f.op_norm, s, tau, 200);
      for (int k = 1; k <= 4; ++k) {
        const double scale = std::exp(static_cast<double>(k));
        const double peeled =
            curvature_factor(lambda / scale, scale * z * f.op_norm, s, tau, 200);
        CHECK(peeled <= base * (1.0 + 1e-12));
      }
    }
  }

  SUBCASE("doubling n halves the factor") {
    const double once = curvature_factor(0.3, 2.0, spec, 1.5, 100);
    const double twice = curvature_factor(0.3, 2.0, spec, 1.5, 200);
    CHECK(once == doctest::Approx(2.0 * twice).epsilon(1e-14));
  }
}

TEST_CASE("chernoff parameter choice") {
  RandomStream rng(404);

  SUBCASE("substitution identity on the unclamped branch, domination always") {
    int unclamped_seen = 0, clamped_seen = 0;
    for (int trial = 0; trial < 100; ++trial) {
      const Spectrum spec = random_spectrum(2 + static_cast<int>(rng.next_u32() % 8),
                                            rng);
      const SpectralFunctionals s(spec);
      const double kappa = 0.1 + 5.0 * rng.uniform01();
      const double v_sq = std::pow(10.0, -1.0 + 6.0 * rng.uniform01());
      const double m = 0.5 + 10.0 * rng.uniform01();
      const double delta = 0.001 + 0.5 * rng.uniform01();
      const ChernoffParams p = choose_lambda_z(s, kappa, v_sq, m, delta);
      const double direct = chernoff_exponent(p, m, v_sq);
      const double closed = chernoff_exponent_closed_form(s, kappa, p, m, v_sq);
      if (p.clamped) {
        ++clamped_seen;
        CHECK(direct <= closed + 1e-10 * std::abs(closed));
      } else {
        ++unclamped_seen;
        CHECK(direct == doctest::Approx(closed).epsilon(1e-10));
      }
      // exact on both branches: (z^2 - m) lambda = 4 e log(2/delta)
      CHECK((p.z_sq - m) * p.lambda ==
            doctest::Approx(4.0 * kE * std::log(2.0 / delta)).epsilon(1e-12));
      CHECK(p.z_sq * p.lambda >= 4.0 * kE * std::log(2.0) - 1e-12);
    }
    CHECK(unclamped_seen > 0);
    CHECK(clamped_seen > 0);
  }

  SUBCASE("small variance clamps lambda at the kappa cap") {
    const Spectrum spec = identity_spectrum(3);
    const SpectralFunctionals s(spec);
    const double kappa = 2.0;
    const ChernoffParams p = choose_lambda_z(s, kappa, 1e-6, 1.0, 0.1);
    CHECK(p.clamped);
    CHECK(p.lambda == doctest::Approx(1.0 / (4.0 * kappa)).epsilon(1e-14));
  }

  SUBCASE("large variance stays on the unclamped branch") {
    const Spectrum spec = identity_spectrum(3);
    const SpectralFunctionals s(spec);
    const ChernoffParams p = choose_lambda_z(s, 0.5, 1e9, 1.0, 0.1);
    CHECK_FALSE(p.clamped);
    const double direct = chernoff_exponent(p, 1.0, 1e9);
    const double closed = chernoff_exponent_closed_form(s, 0.5, p, 1.0, 1e9);
    CHECK(direct == doctest::Approx(closed).epsilon(1e-12));
  }
}

TEST_CASE("gaussian window radius") {
  const int d = 7;
  CHECK(trunc_radius_sq(identity_spectrum(d), 1.0) ==
        doctest::Approx(3.0 * d * (static_cast<double>(d) * d + d)).epsilon(1e-13));
  const double head = 1.3;
  CHECK(trunc_radius_sq(rank_one(head), 1.0) ==
        doctest::Approx(6.0 * head * head).epsilon(1e-13));

  RandomStream rng(405);
  const Spectrum spec = random_spectrum(6, rng);
  std::vector<double> scaled_values;
  for (double v : spec.values()) scaled_values.push_back(1.9 * v);
  CHECK(trunc_radius_sq(Spectrum(scaled_values), 2.5) ==
        doctest::Approx(1.9 * 1.9 * trunc_radius_sq(spec, 2.5)).epsilon(1e-12));
}

TEST_CASE("mean sandwich") {
  const auto [lo_rank_one, hi_rank_one] = mean_sandwich(rank_one(), 1.0);
  CHECK(lo_rank_one == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(hi_rank_one >= lo_rank_one);

  RandomStream rng(406);
  for (int trial = 0; trial < 50; ++trial) {
    const Spectrum spec = random_spectrum(5, rng);
    const double alpha = 0.1 + 5.0 * rng.uniform01();
    const auto [lo, hi] = mean_sandwich(spec, alpha);
    if (alpha >= 1.0) CHECK(lo <= hi);
  }
}

TEST_CASE("variance bounds") {
  RandomStream rng(407);
  const Spectrum spec = random_spectrum(6, rng);
  const SpectralFunctionals s(spec);
  const VarianceBounds at_one = variance_bounds(s, 1.0);
  CHECK(at_one.v_sq_hi == doctest::Approx(s.tr2 * s.tr2).epsilon(1e-14));

  const int d = 5;
  const VarianceBounds id = variance_bounds(identity_spectrum(d), 2.0);
  CHECK(id.v_sq_hi == doctest::Approx(2.0 * d * d + 2.0 * d).epsilon(1e-13));
  CHECK(id.kappa_hi == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("truncation-radius inequality holds on random spectra") {
  CHECK(rho_inequality_check(identity_spectrum(10), 1.0));
  CHECK(rho_inequality_check(rank_one(), 1.0));
  CHECK_THROWS_AS(rho_inequality_check(identity_spectrum(3), 0.5), DomainError);

  RandomStream rng(408);
  for (int trial = 0; trial < 300; ++trial) {
    const int d = 1 + static_cast<int>(rng.next_u32() % 50);
    std::vector<double> values;
    for (int i = 0; i < d; ++i) values.push_back(1e-3 + 4.0 * rng.uniform01());
    std::sort(values.begin(), values.end(), std::greater<double>());
    const double alpha = 1.0 + 19.0 * rng.uniform01();
    CHECK(rho_inequality_check(Spectrum(values), alpha));
  }
}

TEST_CASE("bound report is conjugation invariant and finite for rank one") {
  RandomStream rng(409);
  const Spectrum spec = random_spectrum(8, rng);
  const TailParams params = TailParams::direct(4.0, 0.3, 2.0, 0.05, 100000);

  const CovModel model = CovModel::from_parts(haar_orthogonal(8, rng), spec,
                                              DistKind::Gaussian);
  const BoundReport from_spec = evaluate_bounds(spec, params);
  const BoundReport from_matrix =
      evaluate_bounds(SpectralFunctionals(model.sigma), params);
  CHECK(from_matrix.r1 == doctest::Approx(from_spec.r1).epsilon(1e-10));
  CHECK(from_matrix.r4 == doctest::Approx(from_spec.r4).epsilon(1e-10));
  CHECK(from_matrix.upper_dev == doctest::Approx(from_spec.upper_dev).epsilon(1e-10));
  CHECK(from_matrix.lower_dev == doctest::Approx(from_spec.lower_dev).epsilon(1e-10));
  CHECK(from_matrix.ratio_dev == doctest::Approx(from_spec.ratio_dev).epsilon(1e-10));

  const BoundReport degenerate = evaluate_bounds(rank_one(), params);
  CHECK(std::isfinite(degenerate.upper_dev));
  CHECK(std::isfinite(degenerate.lower_dev));
  CHECK(std::isfinite(degenerate.frak_r));
  CHECK(std::isnan(degenerate.ratio_dev));
}
