#pragma once

// Smoothed entropic quantities over the two epsilon-balls:
//   state ball    B(rho; eps) = { sigma : F(rho, sigma)^2 >= 1 - eps^2 }
//   operator ball P(rho; eps) = { 0 <= P <= 1 : Tr[P rho] >= 1 - eps }

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "oneshot/linalg.hpp"
#include "oneshot/metrics.hpp"
#include "oneshot/parallel.hpp"

namespace oneshot {

enum class BallKind { state_fidelity_ball, operator_ball };

struct SmoothingBudget {
  double eps = 0.0;
  BallKind ball = BallKind::state_fidelity_ball;

  /// Required fidelity-squared for the state ball, or Tr[P rho] for the operator ball.
  double threshold() const { return ball == BallKind::state_fidelity_ball ? 1.0 - eps * eps : 1.0 - eps; }
};

enum class SmoothedKind { exact, lower_bound, upper_bound };

struct SmoothedValue {
  EntropyValue value;
  SmoothedKind kind = SmoothedKind::exact;
  SmoothingBudget budget;
  /// A ball member reproducing `value`: a state for the state ball, an
  /// operator P for the operator ball.
  std::optional<Matrix> witness;
};

/// Optimal spectrum q under a cap.
struct CapSolution {
  double fidelity = 0.0;  // sum_i sqrt(p_i q_i)
  std::vector<double> q;  // length dim
};

/// Maximizes sum_i sqrt(p_i q_i) over probability vectors q of length `dim`
/// with q_i <= cap. The optimum is q_i = min(c p_i, cap) on supp(p), with any
/// surplus spread over the zero-support coordinates. Throws infeasible when
/// cap * dim < 1.
CapSolution min_infidelity_for_cap(std::span<const double> p, double cap, int dim);

struct SpectrumSmoothing {
  double value = 0.0;  // -log2 cap
  double cap = 1.0;    // smallest feasible lambda_max
  std::vector<double> q;
  double fidelity = 1.0;
};

/// Smoothed min-entropy of a state with spectrum p inside a `dim`-dimensional
/// space, solved by bisection on the cap level.
SpectrumSmoothing smooth_min_entropy_spectrum(std::span<const double> p, double eps, int dim);

/// max over B(rho; eps) of S_min. The optimum commutes with rho, so this
/// reduces to the spectral problem above; the witness is diagonal in rho's
/// eigenbasis.
SmoothedValue smooth_min_entropy(const DensityMatrix& rho, double eps);

struct SearchOptions {
  int restarts = 200;
  int levels = 32;  // geometric budget grid in [1e-4, 1] for the mixed-state operator search
  std::uint64_t seed = 0x5eed;
  Execution exec = Execution::parallel;
  double rank_tol = kDefaultRankTol;
};

/// State-smoothed zero-coherent information. Exact for pure states; for mixed
/// states a lower bound certified by the returned ball member.
SmoothedValue state_smoothed_I0(const DensityMatrix& rho_ab, double eps,
                                const SearchOptions& opts = {});

struct OperatorSmoothedBounds {
  SmoothedValue lower;
  /// Available for pure states, and for every state at eps = 0.
  std::optional<SmoothedValue> upper;
};

/// Operator-smoothed zero-coherent information, bracketed. The lower bound
/// maximizes over a restricted operator family (Schmidt-product-diagonal
/// operators for pure states; eigenbasis-diagonal weights and spectral
/// projectors for mixed states).
OperatorSmoothedBounds op_smoothed_I0(const DensityMatrix& rho_ab, double eps,
                                      const SearchOptions& opts = {});

/// S_min^{2 sqrt(eps)}(rho_A) - log2(1 - eps) for a pure state with squared
/// Schmidt coefficients `schmidt_sq` in a space of Schmidt rank `ambient`.
double pure_op_smoothed_upper(std::span<const double> schmidt_sq, int ambient, double eps);

/// Value of the operator-smoothed objective min_sigma S_0^P at a given P.
EntropyValue operator_objective(const Matrix& p, const DensityMatrix& rho_ab,
                                double rank_tol = kDefaultRankTol);

}  // namespace oneshot
