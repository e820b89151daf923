#include <benchmark/benchmark.h>

#include <numbers>
#include <random>

#include "chisq/closedform.hpp"
#include "chisq/integrators.hpp"
#include "chisq/oracle.hpp"

using namespace chisq;

static void BM_Classify(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0, 1);
  std::vector<Matrix3> hs;
  for (int i = 0; i < 1024; ++i) {
    SampleState s{EigenTriple(n(rng), n(rng), n(rng)), {1 + std::abs(n(rng)), 1, 1, n(rng), n(rng), n(rng)}};
    hs.push_back(hessian_proxy(s, 1.0, 0.6));
  }
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(classify(hs[i++ & 1023]));
}
BENCHMARK(BM_Classify);

static void BM_LogWeight(benchmark::State& state) {
  const SampleState s{EigenTriple(-0.4, 0.1, 0.5), {1.2, 0.9, 0.7, 0.1, -0.2, 0.3}};
  const IntegrandParams p{4, 0.6, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(log_weight(s, p));
}
BENCHMARK(BM_LogWeight);

static void BM_VegasSuite(benchmark::State& state) {
  VegasConfig c;
  c.n_evals_per_iteration = static_cast<std::size_t>(state.range(0));
  c.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(expectation_suite({4, 0.6, 1.0}, c));
  state.SetItemsProcessed(state.iterations() * state.range(0) * c.n_iterations);
}
BENCHMARK(BM_VegasSuite)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_MetropolisSuite(benchmark::State& state) {
  McConfig c;
  c.n_samples = static_cast<std::size_t>(state.range(0));
  c.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(expectation_suite({4, 0.6, 1.0}, c));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MetropolisSuite)->Arg(100000)->Unit(benchmark::kMillisecond);

static void BM_SynthesizeAndCount(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto spectrum = PowerSpectrum::power_law(1, 2, 2 * std::numbers::pi / 16);
  for (auto _ : state) {
    const auto phi = chi2_lattice(synthesize_fields(spectrum, 4, {n, static_cast<double>(n)}, 1));
    benchmark::DoNotOptimize(count_stationary(phi, 2.0));
  }
}
BENCHMARK(BM_SynthesizeAndCount)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_SignedZeroSum(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(signed_zero_sum(7));
}
BENCHMARK(BM_SignedZeroSum)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
