#include <doctest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "oneshot/error.hpp"
#include "oneshot/metrics.hpp"
#include "oneshot/random.hpp"

using namespace oneshot;
using test::diag_state;

namespace {

// Uses Eigen's own solver rather than eigh.
double fidelity_oracle(const Matrix& rho, const Matrix& sigma) {
  const Matrix root = Eigen::SelfAdjointEigenSolver<Matrix>(rho).operatorSqrt();
  const Matrix inner = root * sigma * root;
  const RealVector ev = Eigen::SelfAdjointEigenSolver<Matrix>((inner + inner.adjoint()) / 2.0).eigenvalues();
  double f = 0.0;
  for (Eigen::Index k = 0; k < ev.size(); ++k) f += std::sqrt(std::max(0.0, ev[k]));
  return f;
}

double h2(double p) { return -p * std::log2(p) - (1 - p) * std::log2(1 - p); }

}  // namespace

TEST_CASE("fidelity") {
  const DensityMatrix zero = diag_state({1.0, 0.0});
  Vector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const PureState p({2}, plus);
  CHECK(fidelity(zero, p.density()) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(fidelity(PureState({2}, Vector::Unit(2, 0)), p) == doctest::Approx(1.0 / std::sqrt(2.0)));

  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const int d = 2 + static_cast<int>(seed % 3);
    const DensityMatrix rho = random_density_matrix({d}, d, derive_seed(seed, 0));
    const DensityMatrix sigma = random_density_matrix({d}, d, derive_seed(seed, 1));
    const double f = fidelity(rho, sigma);
    CHECK(std::abs(f - fidelity_oracle(rho.matrix(), sigma.matrix())) < 1e-9);
    // Square roots of near-zero eigenvalues cost the oracle digits on rank-deficient input.
    const DensityMatrix thin = random_density_matrix({d}, 1, derive_seed(seed, 2));
    CHECK(std::abs(fidelity(rho, thin) - fidelity_oracle(rho.matrix(), thin.matrix())) < 1e-6);
    CHECK(f == doctest::Approx(fidelity(sigma, rho)).epsilon(1e-10));
    CHECK(fidelity(rho, rho) == doctest::Approx(1.0).epsilon(1e-10));
  }

  const DensityMatrix half({2}, Matrix::Identity(2, 2) * 0.25, true);
  CHECK(fidelity(half, diag_state({0.5, 0.5})) == doctest::Approx(std::sqrt(0.5)));
}

TEST_CASE("trace distance and Fuchs-van de Graaf") {
  CHECK(trace_distance(diag_state({1.0, 0.0}), diag_state({0.5, 0.5})) == doctest::Approx(1.0));
  const DensityMatrix r = random_density_matrix({3}, 3, 1);
  CHECK(trace_distance(r, r) == doctest::Approx(0.0).scale(1.0));

  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const int d = 2 + static_cast<int>(seed % 3);
    const DensityMatrix rho = random_density_matrix({d}, 1 + seed % d, derive_seed(seed, 7));
    const DensityMatrix sigma = random_density_matrix({d}, d, derive_seed(seed, 8));
    const double f = fidelity(rho, sigma);
    const double half = 0.5 * trace_distance(rho, sigma);
    CHECK(1.0 - f <= half + 1e-10);
    CHECK(half <= std::sqrt(std::max(0.0, 1.0 - f * f)) + 1e-10);
    CHECK(trace_distance(rho, sigma) == doctest::Approx(trace_distance(sigma, rho)));
  }
}

TEST_CASE("von Neumann and Shannon entropies") {
  CHECK(von_neumann_entropy(random_density_matrix({3}, 1, 2)).value == doctest::Approx(0.0).scale(1.0));
  CHECK(von_neumann_entropy(diag_state({0.5, 0.5})).value == doctest::Approx(1.0));
  CHECK(von_neumann_entropy(diag_state({0.9, 0.1})).value == doctest::Approx(0.46900).epsilon(1e-5));
  CHECK(von_neumann_entropy(diag_state({0.9, 0.1})).value == doctest::Approx(h2(0.9)).epsilon(1e-13));
  CHECK(shannon_entropy(std::vector<double>{0.25, 0.25, 0.5, 0.0}) == doctest::Approx(1.5));
}

TEST_CASE("relative entropy") {
  const DensityMatrix rho = diag_state({0.9, 0.1});
  const DensityMatrix mixed = diag_state({0.5, 0.5});
  CHECK(relative_entropy(rho, rho).value == doctest::Approx(0.0).scale(1.0));
  CHECK(relative_entropy(rho, mixed).value == doctest::Approx(0.531004).epsilon(1e-6));
  CHECK(relative_entropy(rho, mixed).value == doctest::Approx(1.0 - h2(0.9)).epsilon(1e-13));
  const EntropyValue inf = relative_entropy(mixed, diag_state({1.0, 0.0}));
  CHECK_FALSE(inf.finite);
  CHECK(std::isinf(inf.value));
  CHECK(relative_entropy(diag_state({1.0, 0.0}), mixed).value == doctest::Approx(1.0));
}

TEST_CASE("Renyi relative entropy") {
  const DensityMatrix rho = diag_state({0.9, 0.1});
  const DensityMatrix mixed = diag_state({0.5, 0.5});
  for (double a : {0.1, 0.5, 0.9}) CHECK(std::abs(renyi_relative(a, rho, rho).value) < 1e-12);

  // -2 log2(sqrt(0.45) + sqrt(0.05)) = log2(5/4)
  const double half = renyi_relative(0.5, rho, mixed).value;
  CHECK(half == doctest::Approx(-2.0 * std::log2(std::sqrt(0.45) + std::sqrt(0.05))).epsilon(1e-12));
  CHECK(half == doctest::Approx(std::log2(1.25)).epsilon(1e-12));

  CHECK(std::abs(renyi_relative(1.0 - 1e-5, rho, mixed).value - relative_entropy(rho, mixed).value) < 1e-4);

  Rng rng(31);
  for (int t = 0; t < 50; ++t) {
    const DensityMatrix a = diag_state(random_simplex_point(3, rng));
    const DensityMatrix b = diag_state(random_simplex_point(3, rng));
    double prev = -1e300;
    for (double alpha = 0.05; alpha < 1.0; alpha += 0.05) {
      const double v = renyi_relative(alpha, a, b).value;
      CHECK(v >= prev - 1e-10);
      prev = v;
    }
  }
  CHECK_THROWS_AS(renyi_relative(1.5, rho, mixed), Error);
}

TEST_CASE("projected order-0 entropy") {
  const DensityMatrix zero = diag_state({1.0, 0.0});
  const DensityMatrix mixed = diag_state({0.5, 0.5});
  const Matrix one = Matrix::Identity(2, 2);
  CHECK(s0_projected(one, zero, mixed).value == doctest::Approx(1.0));
  CHECK(s0_projected(zero.matrix(), zero, mixed).value == doctest::Approx(1.0));
  CHECK(s0_projected(0.5 * one, zero, mixed).value == doctest::Approx(2.0));
  CHECK_THROWS_AS(s0_projected(1.5 * one, zero, mixed), Error);
  CHECK_FALSE(s0_projected(one, zero, diag_state({0.0, 1.0})).finite);

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const DensityMatrix rho = random_density_matrix({3}, 2, derive_seed(seed, 0));
    const DensityMatrix sigma = random_density_matrix({3}, 3, derive_seed(seed, 1));
    const double expected = -std::log2((support_projector(rho) * sigma.matrix()).trace().real());
    CHECK(s0_projected(Matrix::Identity(3, 3), rho, sigma).value == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("min-entropy") {
  CHECK(min_entropy(DensityMatrix::maximally_mixed({3})).value == doctest::Approx(std::log2(3.0)));
  CHECK(min_entropy(diag_state({0.5, 0.3, 0.2})).value == doctest::Approx(1.0));
  CHECK(std::abs(min_entropy(random_density_matrix({3}, 1, 4)).value) < 1e-12);
  CHECK(min_entropy(std::vector<double>{0.2, 0.8}) == doctest::Approx(-std::log2(0.8)));
}

TEST_CASE("coherent and zero-coherent information") {
  for (int m = 2; m <= 8; ++m) {
    const DensityMatrix psi = maximally_entangled(m).density();
    CHECK(std::abs(zero_coherent_information(psi).value - std::log2(m)) < 1e-9);
    CHECK(std::abs(coherent_information(psi).value - std::log2(m)) < 1e-9);
  }
  CHECK(std::abs(zero_coherent_information(test::ket00().density()).value) < 1e-12);
  const DensityMatrix noise = DensityMatrix::maximally_mixed({2, 2});
  CHECK(coherent_information(noise).value == doctest::Approx(-1.0));
  CHECK(zero_coherent_information(noise).value == doctest::Approx(-1.0));

  SUBCASE("purification duality") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      const DensityMatrix rho = random_density_matrix({2, 2}, 3, seed);
      const PureState psi = purify(rho);
      REQUIRE(psi.dims().size() == 3);
      const DensityMatrix ae = partial_trace(psi.density(), std::vector<int>{0, 2});
      const DensityMatrix ae_bip({2, psi.dims()[2]}, ae.matrix());
      CHECK(coherent_information(rho).value == doctest::Approx(-coherent_information(ae_bip).value).epsilon(1e-9));
    }
  }

  SUBCASE("closed form against a grid over conditioning qubit states") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const DensityMatrix rho = random_density_matrix({2, 2}, 2, derive_seed(seed, 3));
      const Matrix pi = support_projector(rho);
      double best = std::numeric_limits<double>::infinity();
      const int steps = 60;
      for (int a = 0; a <= steps; ++a) {
        const double theta = std::numbers::pi * a / steps;
        for (int b = 0; b < 2 * steps; ++b) {
          const double phi = std::numbers::pi * b / steps;
          Vector v(2);
          v << std::cos(theta / 2), std::polar(std::sin(theta / 2), phi);
          const Matrix sigma = kron(Matrix::Identity(2, 2), Matrix(v * v.adjoint()));
          best = std::min(best, -std::log2((pi * sigma).trace().real()));
        }
      }
      const double closed = zero_coherent_information(rho).value;
      CHECK(closed <= best + 1e-12);
      CHECK(best - closed < 1e-3);
    }
  }
}

TEST_CASE("conditional order-0 entropy of an operator") {
  const Matrix x = maximally_entangled(2).projector();
  CHECK(conditional_zero_entropy(x, {2, 2}).value == doctest::Approx(1.0));
  CHECK(conditional_zero_entropy(0.5 * x, {2, 2}).value == doctest::Approx(2.0));
}
