#pragma once

// Quantum-classical ensemble states, information-spectrum diagnostics of
// tensor powers, and entanglement-of-assistance references.

#include <cstdint>
#include <optional>
#include <vector>

#include "oneshot/distillation.hpp"
#include "oneshot/linalg.hpp"
#include "oneshot/parallel.hpp"

namespace oneshot {

struct QCBlock {
  double weight;
  DensityMatrix block;  // on A (x) B
};

/// sum_i p_i sigma^i_AB (x) |i><i|_Z, kept block-diagonal.
struct QCState {
  std::vector<QCBlock> members;

  int register_dim() const { return static_cast<int>(members.size()); }
  /// Dense operator on A (x) B (x) Z with dims {d_A, d_B, m}.
  DensityMatrix dense() const;
};

QCState qc_state(const PureEnsemble& ensemble);

/// Smoothed zero-coherent information of the ensemble's qc state, with the
/// average-fidelity ball of radius eps. Equals ensemble_budget_allocation's
/// unfloored value at budget eps, so ed_ensemble_lower(E, eps) is the floor
/// of qc_smoothed_I0(E, eps / 2).
double qc_smoothed_I0(const PureEnsemble& ensemble, double eps);

/// Largest total dimension accepted by the tensor-power diagnostics. Reads
/// ONESHOT_DIM_CAP when set, else 4096.
int default_dimension_cap();

struct DiagnosticOptions {
  int dimension_cap = default_dimension_cap();
  Execution exec = Execution::parallel;
  bool allow_commuting_shortcut = true;
};

/// Tr[{D >= 0} D] for D = rho^{(x)n} - 2^{n gamma} sigma^{(x)n}. Jointly
/// diagonalizable inputs are summed over type classes; the rest use a dense
/// eigendecomposition of the tensor powers.
double divergence_diagnostic(const DensityMatrix& rho, const DensityMatrix& sigma, int n, double gamma,
                             const DiagnosticOptions& opts = {});

/// Dense reference path, always.
double divergence_diagnostic_dense(const DensityMatrix& rho, const DensityMatrix& sigma, int n,
                                   double gamma, int dimension_cap = default_dimension_cap());

struct GammaGrid {
  double start = -8.0;
  double stop = 2.0;
  double step = 0.01;

  /// start + k step for k = 0, 1, ... while <= stop (with 1e-12 slack).
  std::vector<double> points() const;
};

struct SpectrumEstimate {
  std::vector<int> n_values;
  std::vector<double> gammas;
  std::vector<std::vector<double>> curves;         // curves[n_index][gamma_index]
  std::vector<std::optional<double>> rate_estimate;  // empty when no grid point qualifies
  double tol = 0.05;
};

/// For n = 1..n_max, the largest grid gamma whose diagnostic is >= 1 - tol.
SpectrumEstimate inf_divergence_rate_estimate(const DensityMatrix& rho, const DensityMatrix& sigma,
                                              int n_max, double tol, const GammaGrid& grid,
                                              const DiagnosticOptions& opts = {});

struct EntropicEoa {
  double value = 0.0;
  PureEnsemble witness;
  double seed_value = 0.0;  // eigendecomposition ensemble
};

/// max over searched decompositions of sum_i p_i S(Tr_B psi_i).
EntropicEoa entropic_eoa(const DensityMatrix& rho_ab, const DecompositionOptions& opts = {});

/// min(S(rho_A), S(rho_B)): ceiling on the average entanglement of any
/// decomposition, used as a sanity reference.
double asymptotic_reference(const DensityMatrix& rho_ab);

/// sum_i p_i S(Tr_B psi_i).
double average_entanglement(const PureEnsemble& ensemble);

}  // namespace oneshot
