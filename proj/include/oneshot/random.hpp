#pragma once

// Seeded generators for Haar-random states, unitaries and test operators.
// Every draw flows from an explicit seed; nothing reads global state.

#include <cstdint>
#include <random>
#include <variant>

#include "oneshot/linalg.hpp"

namespace oneshot {

/// splitmix64 finalizer; gives independent streams for (seed, index) pairs.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return uniform_(engine_); }
  double normal() { return normal_(engine_); }
  Complex complex_normal() { return {normal(), normal()}; }
  int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

 private:
  std::mt19937_64 engine_;
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Ginibre matrix with standard complex Gaussian entries.
Matrix ginibre(int rows, int cols, Rng& rng);

/// Haar unitary from QR of a Ginibre matrix with the R-diagonal phases removed.
Matrix random_unitary(int d, Rng& rng);

/// Random Hermitian matrix, GUE-like, Frobenius norm 1.
Matrix random_hermitian(int d, Rng& rng);

/// Operator 0 <= L <= 1 with Haar eigenbasis and uniform eigenvalues.
Matrix random_effect(int d, Rng& rng);

PureState random_pure_state(const Dims& dims, Rng& rng);
PureState random_pure_state(const Dims& dims, std::uint64_t seed);

/// Induced-measure mixed state: partial trace of a Haar pure state on
/// C^d (x) C^rank. rank == d gives the Hilbert-Schmidt measure.
DensityMatrix random_density_matrix(const Dims& dims, int rank, Rng& rng);
DensityMatrix random_density_matrix(const Dims& dims, int rank, std::uint64_t seed);

/// Random probability vector of length n (flat Dirichlet).
std::vector<double> random_simplex_point(int n, Rng& rng);

enum class StateKind { pure, mixed };

/// Pure kinds ignore rank.
std::variant<DensityMatrix, PureState> random_state(StateKind kind, const Dims& dims, int rank,
                                                    std::uint64_t seed);

}  // namespace oneshot
