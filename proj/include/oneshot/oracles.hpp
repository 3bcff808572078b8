#pragma once

// Brute-force verifiers for the smoothing and distillation solvers, and the
// randomized inequality harness.

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "oneshot/distillation.hpp"
#include "oneshot/parallel.hpp"

namespace oneshot {

struct OracleConfig {
  double grid_resolution = 1e-3;
  int sample_count = 10000;
  std::uint64_t seed = 1;
  int dimension_cap = 6;
  Execution exec = Execution::parallel;

  /// Simplex grid denominator, ceil(1 / grid_resolution).
  int grid_points() const;
  void validate(int dim) const;
};

/// Smoothed min-entropy of diag(p) by exhaustive search over grid spectra
/// q = k / N, ordered like p, subject to (sum_i sqrt(p_i q_i))^2 >= 1 - eps^2.
/// Levels of max(q) are scanned upward and the first feasible one wins.
double oracle_smooth_min_entropy(std::span<const double> p, double eps, const OracleConfig& cfg);

struct PerturbationReport {
  double best_value = -std::numeric_limits<double>::infinity();  // best S_min found inside the ball
  int members_found = 0;                                         // samples that landed inside the ball
  int samples = 0;
};

/// Samples sigma = U diag(q) U^dagger with U = exp(i theta G), theta <= 0.3.
/// Half the spectra q mix p toward uniform; the other half are p water-filled
/// to a cap slightly below `solver_cap`. Keeps samples with
/// F(diag(p), sigma)^2 >= 1 - eps^2.
PerturbationReport oracle_noncommuting_search(std::span<const double> p, double eps, double solver_cap,
                                              const OracleConfig& cfg);

/// Grid version of the ensemble budget allocation: per-member frontiers of
/// (largest reduced eigenvalue, fidelity) over grid spectra, then a sweep over
/// the common cap. Returns the unfloored optimum. With `subnormalized` the
/// members may also be scaled by c in {0.01, 0.02, ..., 1}.
double oracle_ensemble_allocation(const PureEnsemble& ensemble, double budget, const OracleConfig& cfg,
                                  bool subnormalized = false);

/// Budget eps/2, matching ed_ensemble_lower.
double oracle_ensemble_lower(const PureEnsemble& ensemble, double eps, const OracleConfig& cfg);

struct LemmaCheck {
  std::string name;
  int trials = 0;
  int violations = 0;                                          // slack below -1e-9
  double max_violation = 0.0;                                  // max(0, -slack)
  double min_slack = std::numeric_limits<double>::infinity();
  double mean_slack = 0.0;
};

struct LemmaReport {
  std::vector<LemmaCheck> checks;
  double violation_tol = 1e-9;

  bool passed() const;
  double max_violation() const;
};

/// Runs every inequality on `trials` seeded random fixtures.
LemmaReport verify_lemma_suite(int trials, std::uint64_t seed, const OracleConfig& cfg = {});

}  // namespace oneshot
