#pragma once

// One-shot distillation bounds: pure states, pure-state ensembles, and
// assisted distillation from a mixed state.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "oneshot/linalg.hpp"
#include "oneshot/parallel.hpp"

namespace oneshot {

struct EnsembleMember {
  double weight;
  PureState state;
};

class PureEnsemble {
 public:
  /// Weights must be positive and sum to 1; members share dims. Members may
  /// be subnormalized only when `allow_subnormalized` is set.
  explicit PureEnsemble(std::vector<EnsembleMember> members, bool allow_subnormalized = false,
                        double tol = kStateTol);

  const std::vector<EnsembleMember>& members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  const Dims& dims() const { return members_.front().state.dims(); }
  bool subnormalized() const noexcept { return subnormalized_; }

  /// sum_i p_i phi_i.
  DensityMatrix average() const;

 private:
  std::vector<EnsembleMember> members_;
  bool subnormalized_;
};

struct BoundReport {
  double lower = 0.0;
  double upper = 0.0;
  double eps = 0.0;
  std::map<std::string, double> eps_derived;
  std::string method;
  bool upper_rigorous = true;
  std::vector<std::string> warnings;
  std::optional<PureEnsemble> lower_witness;
  std::optional<PureEnsemble> upper_witness;
  std::optional<Matrix> witness_state;
};

/// log2 floor(2^x), with a relative slack of 1e-9 so near-integers round up.
double floor_log2_integer(double bits);

enum class UpperBoundVariant {
  with_correction,  // S_min^{eps'} - log2(1 - 2 sqrt(eps))
  without_correction
};

/// Bracket on the one-shot distillable entanglement of a pure state:
///   lower = log2 floor(2^{S_min^eps(rho_A)})
///   upper = S_min^{eps'}(rho_A) - log2(1 - 2 sqrt(eps)),  eps' = sqrt(2 sqrt(eps))
/// For eps >= 0.25 the corrected upper bound is +inf and a warning is attached.
BoundReport ed_pure_bounds(const PureState& phi, double eps,
                           UpperBoundVariant variant = UpperBoundVariant::with_correction);

/// Hashing-type lower bound: floor of S_min^{eps/8}(rho_A) + log2(1/d_A + eps^2/4).
/// Returns the unfloored value when it is below zero.
double hashing_bound_pure(const PureState& phi, double eps);

/// min_i -log2 lambda_max(Tr_B phi_i). Works on subnormalized members.
double f_min(const PureEnsemble& ensemble);

struct EnsembleLowerResult {
  double value = 0.0;      // floored to log2 of an integer
  double unfloored = 0.0;  // bisection optimum before flooring
  double budget = 0.0;     // average-infidelity budget actually used
  PureEnsemble witness;    // realizes `value`
  PureEnsemble unfloored_witness;
};

/// Max over ensembles {p_i, phibar_i} with sum_i p_i F(phi_i, phibar_i) >= 1 - budget
/// of min_i S_min(phibar_i,A). The per-member smoothing is the capped
/// water-filling spectrum in the member's Schmidt basis.
EnsembleLowerResult ensemble_budget_allocation(const PureEnsemble& ensemble, double budget);

/// Budget eps/2.
EnsembleLowerResult ed_ensemble_lower(const PureEnsemble& ensemble, double eps);

struct EnsembleUpperResult {
  double value = 0.0;
  double budget = 0.0;  // sqrt(2 sqrt(eps))
  std::optional<PureEnsemble> witness;
};

/// Same allocation over subnormalized members phibar_i = sqrt(c_i) chi_i.
EnsembleUpperResult ed_ensemble_upper(const PureEnsemble& ensemble, double eps);

BoundReport ed_ensemble_bounds(const PureEnsemble& ensemble, double eps);

struct DecompositionOptions {
  int restarts = 200;
  std::uint64_t seed = 1;
  Execution exec = Execution::parallel;
  int max_evaluations = 120;  // per restart
};

struct DecompositionResult {
  double value = 0.0;
  PureEnsemble ensemble;
  int restarts_used = 0;
};

/// Pure-state ensemble realizing rho: psi_i = sum_k W_ik sqrt(lambda_k) v_k
/// for the eigenpairs (lambda_k, v_k) and an isometry W (m x rank). Members
/// with weight below 1e-14 are dropped.
PureEnsemble ensemble_from_isometry(const DensityMatrix& rho, const Matrix& isometry,
                                    double rank_tol = kDefaultRankTol);

/// Randomized local search over ensemble decompositions of rho maximizing
/// `objective`. Stops early once `ceiling` is reached.
/// Restart 0 seeds from the eigendecomposition and structured seeds; the
/// objective must be safe to call concurrently.
DecompositionResult search_decompositions(const DensityMatrix& rho,
                                          const std::function<double(const PureEnsemble&)>& objective,
                                          double ceiling, const DecompositionOptions& opts);

/// Assisted one-shot distillation: lower = best ed_ensemble_lower over
/// searched decompositions of rho, upper = min(S(rho_A), S(rho_B)) as a
/// non-rigorous reference ceiling.
BoundReport eoa_one_shot(const DensityMatrix& rho_ab, double eps,
                         const DecompositionOptions& opts = {});

}  // namespace oneshot
