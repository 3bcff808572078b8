#pragma once

// Distance measures and entropic functionals. Logarithms are base 2.

#include <limits>
#include <span>

#include "oneshot/linalg.hpp"

namespace oneshot {

/// An entropy in bits, or +infinity when a support condition fails.
struct EntropyValue {
  static constexpr int base = 2;

  double value = 0.0;
  bool finite = true;

  static EntropyValue of(double bits) { return {bits, true}; }
  static EntropyValue infinite() { return {std::numeric_limits<double>::infinity(), false}; }
};

/// ||sqrt(rho) sqrt(sigma)||_1. Subnormalized inputs are allowed.
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

/// |<a|b>|; equals the operator fidelity of the rank-one projectors, also
/// for subnormalized vectors.
double fidelity(const PureState& a, const PureState& b);

/// Tr|rho - sigma| (not halved).
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

double shannon_entropy(std::span<const double> p);
EntropyValue von_neumann_entropy(const DensityMatrix& rho);

/// S(rho||sigma); infinite unless supp rho is inside supp sigma.
EntropyValue relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma,
                              double rank_tol = kDefaultRankTol);

/// (1/(alpha-1)) log Tr[rho^alpha sigma^(1-alpha)] for alpha in (0,1).
EntropyValue renyi_relative(double alpha, const DensityMatrix& rho, const DensityMatrix& sigma,
                            double rank_tol = kDefaultRankTol);

/// -log Tr[sqrt(P) Pi_rho sqrt(P) sigma] for 0 <= P <= 1.
EntropyValue s0_projected(const Matrix& p, const DensityMatrix& rho, const DensityMatrix& sigma,
                          double rank_tol = kDefaultRankTol);

/// -log lambda_max(rho).
EntropyValue min_entropy(const DensityMatrix& rho);
double min_entropy(std::span<const double> spectrum);

/// S(rho_B) - S(rho_AB) for a two-subsystem state.
EntropyValue coherent_information(const DensityMatrix& rho_ab);

/// min over sigma_B of -log Tr[X (1 (x) sigma_B)] = -log lambda_max(Tr_A X)
/// for an operator X >= 0 on A (x) B.
EntropyValue conditional_zero_entropy(const Matrix& x, const Dims& dims);

/// I_0^{A->B}: conditional_zero_entropy of the support projector of rho_AB.
EntropyValue zero_coherent_information(const DensityMatrix& rho_ab,
                                       double rank_tol = kDefaultRankTol);

}  // namespace oneshot
