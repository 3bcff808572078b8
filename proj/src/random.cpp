#include "oneshot/random.hpp"

#include <cmath>

#include "oneshot/error.hpp"

namespace oneshot {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Matrix ginibre(int rows, int cols, Rng& rng) {
  Matrix g(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) g(i, j) = rng.complex_normal() / std::sqrt(2.0);
  return g;
}

Matrix random_unitary(int d, Rng& rng) {
  require(d >= 1, ErrorCode::invalid_argument, "random_unitary: dimension must be positive");
  const Matrix g = ginibre(d, d, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < d; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0.0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

Matrix random_hermitian(int d, Rng& rng) {
  const Matrix g = ginibre(d, d, rng);
  Matrix h = 0.5 * (g + g.adjoint());
  const double n = h.norm();
  return n > 0.0 ? Matrix(h / n) : h;
}

Matrix random_effect(int d, Rng& rng) {
  const Matrix u = random_unitary(d, rng);
  RealVector ev(d);
  for (int k = 0; k < d; ++k) ev[k] = rng.uniform();
  return u * ev.asDiagonal() * u.adjoint();
}

PureState random_pure_state(const Dims& dims, Rng& rng) {
  const int d = total_dimension(dims);
  Vector v(d);
  for (int i = 0; i < d; ++i) v[i] = rng.complex_normal();
  return PureState::normalized(dims, v);
}

PureState random_pure_state(const Dims& dims, std::uint64_t seed) {
  Rng rng(seed);
  return random_pure_state(dims, rng);
}

DensityMatrix random_density_matrix(const Dims& dims, int rank, Rng& rng) {
  const int d = total_dimension(dims);
  require(rank >= 1 && rank <= d, ErrorCode::invalid_argument,
          "random_density_matrix: rank must lie in [1, prod(dims)]");
  const Matrix g = ginibre(d, rank, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(dims, rho);
}

DensityMatrix random_density_matrix(const Dims& dims, int rank, std::uint64_t seed) {
  Rng rng(seed);
  return random_density_matrix(dims, rank, rng);
}

std::vector<double> random_simplex_point(int n, Rng& rng) {
  std::vector<double> p(n);
  double sum = 0.0;
  for (auto& x : p) {
    x = -std::log(1.0 - rng.uniform());
    sum += x;
  }
  for (auto& x : p) x /= sum;
  return p;
}

std::variant<DensityMatrix, PureState> random_state(StateKind kind, const Dims& dims, int rank,
                                                    std::uint64_t seed) {
  if (kind == StateKind::pure) return random_pure_state(dims, seed);
  return random_density_matrix(dims, rank, seed);
}

}  // namespace oneshot
