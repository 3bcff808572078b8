// Serial reference vs OpenMP kernel for each parallel hot spot. The second
// benchmark argument selects the mode: 0 serial, 1 parallel.

#include <benchmark/benchmark.h>

#include "oneshot/oracles.hpp"
#include "oneshot/random.hpp"
#include "oneshot/smoothing.hpp"
#include "oneshot/spectrum.hpp"

using namespace oneshot;

namespace {

Execution mode(const benchmark::State& state) { return state.range(1) ? Execution::parallel : Execution::serial; }

void BM_OracleGrid(benchmark::State& state) {
  OracleConfig cfg;
  cfg.exec = mode(state);
  const std::vector<double> p = [&] {
    Rng rng(1);
    return random_simplex_point(static_cast<int>(state.range(0)), rng);
  }();
  for (auto _ : state) benchmark::DoNotOptimize(oracle_smooth_min_entropy(p, 0.1, cfg));
}
BENCHMARK(BM_OracleGrid)->ArgsProduct({{3, 4}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_PerturbationSampling(benchmark::State& state) {
  OracleConfig cfg;
  cfg.exec = mode(state);
  cfg.sample_count = static_cast<int>(state.range(0));
  const std::vector<double> p{0.6, 0.3, 0.1};
  const double cap = smooth_min_entropy_spectrum(p, 0.2, 3).cap;
  for (auto _ : state) benchmark::DoNotOptimize(oracle_noncommuting_search(p, 0.2, cap, cfg).best_value);
}
BENCHMARK(BM_PerturbationSampling)->ArgsProduct({{10000}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_GammaSweep(benchmark::State& state) {
  DiagnosticOptions opts;
  opts.exec = mode(state);
  opts.allow_commuting_shortcut = false;
  const DensityMatrix rho = random_density_matrix({2}, 2, 3);
  const DensityMatrix sigma = random_density_matrix({2}, 2, 4);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(inf_divergence_rate_estimate(rho, sigma, n, 0.05, GammaGrid{-4.0, 1.0, 0.05}, opts));
}
BENCHMARK(BM_GammaSweep)->ArgsProduct({{4, 6}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_LemmaTrials(benchmark::State& state) {
  OracleConfig cfg;
  cfg.exec = mode(state);
  const int trials = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(verify_lemma_suite(trials, 1, cfg).passed());
}
BENCHMARK(BM_LemmaTrials)->ArgsProduct({{200}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_OperatorSearch(benchmark::State& state) {
  SearchOptions opts;
  opts.exec = mode(state);
  opts.restarts = static_cast<int>(state.range(0));
  const DensityMatrix rho = random_density_matrix({3, 3}, 5, 2);
  for (auto _ : state) benchmark::DoNotOptimize(op_smoothed_I0(rho, 0.1, opts).lower.value.value);
}
BENCHMARK(BM_OperatorSearch)->ArgsProduct({{64}, {0, 1}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
