#include <doctest.h>

#include <algorithm>
#include <atomic>
#include <stdexcept>

#include "helpers.hpp"
#include "oneshot/oracles.hpp"
#include "oneshot/parallel.hpp"
#include "oneshot/random.hpp"
#include "oneshot/smoothing.hpp"
#include "oneshot/spectrum.hpp"

using namespace oneshot;

// Every parallel kernel must reproduce its serial reference bit for bit, so
// the thread count is forced above the core count.
struct ForceThreads {
  ForceThreads() {
#ifdef _OPENMP
    omp_set_num_threads(4);
#endif
  }
};
static const ForceThreads force_threads;

TEST_CASE("for_each_index visits every index and rethrows") {
  std::vector<int> hits(1000, 0);
  for_each_index(Execution::parallel, 1000, [&](std::int64_t i) { hits[i] += 1; });
  CHECK(std::count(hits.begin(), hits.end(), 1) == 1000);

  std::atomic<int> calls{0};
  CHECK_THROWS_AS(for_each_index(Execution::parallel, 50,
                                 [&](std::int64_t i) {
                                   ++calls;
                                   if (i == 17) throw std::runtime_error("boom");
                                 }),
                  std::runtime_error);
  CHECK(calls.load() == 50);
}

TEST_CASE("oracle kernels") {
  OracleConfig par;
  par.grid_resolution = 2e-3;
  par.sample_count = 500;
  OracleConfig ser = par;
  ser.exec = Execution::serial;

  const std::vector<double> p{0.5, 0.3, 0.15, 0.05};
  CHECK(oracle_smooth_min_entropy(p, 0.1, par) == oracle_smooth_min_entropy(p, 0.1, ser));

  const PerturbationReport a = oracle_noncommuting_search(p, 0.1, 0.45, par);
  const PerturbationReport b = oracle_noncommuting_search(p, 0.1, 0.45, ser);
  CHECK(a.best_value == b.best_value);
  CHECK(a.members_found == b.members_found);

  const PureEnsemble e({{0.3, random_pure_state({2, 2}, 1)}, {0.7, random_pure_state({2, 2}, 2)}});
  CHECK(oracle_ensemble_lower(e, 0.1, par) == oracle_ensemble_lower(e, 0.1, ser));
  CHECK(oracle_ensemble_allocation(e, 0.05, par, true) == oracle_ensemble_allocation(e, 0.05, ser, true));

  const LemmaReport lp = verify_lemma_suite(60, 5, par);
  const LemmaReport ls = verify_lemma_suite(60, 5, ser);
  for (std::size_t i = 0; i < lp.checks.size(); ++i) {
    CHECK(lp.checks[i].mean_slack == ls.checks[i].mean_slack);
    CHECK(lp.checks[i].min_slack == ls.checks[i].min_slack);
  }
}

TEST_CASE("operator smoothing search") {
  SearchOptions par;
  par.restarts = 16;
  par.levels = 12;
  SearchOptions ser = par;
  ser.exec = Execution::serial;
  const DensityMatrix rho = random_density_matrix({2, 3}, 4, 8);
  const OperatorSmoothedBounds a = op_smoothed_I0(rho, 0.1, par);
  const OperatorSmoothedBounds b = op_smoothed_I0(rho, 0.1, ser);
  CHECK(a.lower.value.value == b.lower.value.value);
  REQUIRE(a.lower.witness);
  CHECK(*a.lower.witness == *b.lower.witness);
}

TEST_CASE("decomposition search") {
  DecompositionOptions par;
  par.restarts = 16;
  par.max_evaluations = 30;
  DecompositionOptions ser = par;
  ser.exec = Execution::serial;
  const DensityMatrix rho = random_density_matrix({2, 2}, 3, 4);
  const BoundReport a = eoa_one_shot(rho, 0.1, par);
  const BoundReport b = eoa_one_shot(rho, 0.1, ser);
  CHECK(a.lower == b.lower);
  const EntropicEoa ea = entropic_eoa(rho, par);
  const EntropicEoa eb = entropic_eoa(rho, ser);
  CHECK(ea.value == eb.value);
  CHECK(ea.witness.size() == eb.witness.size());
}

TEST_CASE("gamma sweep") {
  DiagnosticOptions par;
  DiagnosticOptions ser;
  ser.exec = Execution::serial;
  const DensityMatrix rho = random_density_matrix({2}, 2, 1);
  const DensityMatrix sigma = random_density_matrix({2}, 2, 2);
  const GammaGrid grid{-3.0, 1.0, 0.05};
  const SpectrumEstimate a = inf_divergence_rate_estimate(rho, sigma, 3, 0.05, grid, par);
  const SpectrumEstimate b = inf_divergence_rate_estimate(rho, sigma, 3, 0.05, grid, ser);
  CHECK(a.curves == b.curves);
  CHECK(a.rate_estimate == b.rate_estimate);
}
