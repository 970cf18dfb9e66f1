#include <benchmark/benchmark.h>

#include "covlab/harness.hpp"
#include "covlab/oracle.hpp"

using namespace covlab;

namespace {

void BM_philox_uniform(benchmark::State& state) {
  RandomStream rng(1);
  double sink = 0.0;
  for (auto _ : state) {
    sink += rng.uniform01();
  }
  benchmark::DoNotOptimize(sink);
}
BENCHMARK(BM_philox_uniform);

void BM_gaussian_draw(benchmark::State& state) {
  RandomStream rng(2);
  double sink = 0.0;
  for (auto _ : state) {
    sink += rng.gaussian();
  }
  benchmark::DoNotOptimize(sink);
}
BENCHMARK(BM_gaussian_draw);

void BM_trunc_laplace_draw(benchmark::State& state) {
  RandomStream rng(3);
  double sink = 0.0;
  for (auto _ : state) {
    sink += trunc_laplace_scalar(rng);
  }
  benchmark::DoNotOptimize(sink);
}
BENCHMARK(BM_trunc_laplace_draw);

void BM_haar_orthogonal(benchmark::State& state) {
  RandomStream rng(4);
  const int d = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(haar_orthogonal(d, rng));
  }
}
BENCHMARK(BM_haar_orthogonal)->Arg(10)->Arg(50);

void BM_operator_norm(benchmark::State& state) {
  RandomStream rng(5);
  const int d = static_cast<int>(state.range(0));
  Matrix g(d, d);
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) g(i, j) = rng.gaussian();
  }
  const SymMatrix a(g * g.transpose() / d);
  for (auto _ : state) {
    benchmark::DoNotOptimize(operator_norm(a, 1e-12));
  }
}
BENCHMARK(BM_operator_norm)->Arg(10)->Arg(50);

void BM_replicate_ratio(benchmark::State& state) {
  const int d = 50;
  const long n = state.range(1);
  const DistKind kind = static_cast<DistKind>(state.range(0));
  const Spectrum lambda = lambda_profile(0.5, d);
  const double expected = expected_frob_error(lambda, kind, n).expected_frob_sq;
  std::uint64_t j = 0;
  for (auto _ : state) {
    RandomStream rng(6, 0, 0, static_cast<std::uint32_t>(j++));
    benchmark::DoNotOptimize(replicate_ratio(kind, lambda, n, expected, rng));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_replicate_ratio)
    ->Args({0, 1000})   // truncated laplace
    ->Args({1, 1000})   // uniform sphere
    ->Args({2, 1000});  // gaussian

void BM_sigma_sq_quadrature(benchmark::State& state) {
  for (auto _ : state) {
    const double value = adaptive_quadrature(
        [](double x) { return x * x * std::exp(-std::abs(x)); }, -6.0, 6.0, 1e-12);
    benchmark::DoNotOptimize(value);
  }
}
BENCHMARK(BM_sigma_sq_quadrature);

}  // namespace

BENCHMARK_MAIN();
