#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "oneshot/error.hpp"
#include "oneshot/oracles.hpp"
#include "oneshot/random.hpp"
#include "oneshot/smoothing.hpp"

using namespace oneshot;
using test::diag_state;

namespace {

double fid_sq(const DensityMatrix& rho, const Matrix& witness) {
  const double f = fidelity(rho, DensityMatrix(rho.dims(), witness, false, 1e-6));
  return f * f;
}

SearchOptions quick_search() {
  SearchOptions o;
  o.restarts = 8;
  o.levels = 16;
  return o;
}

// One-way LOCC of Lo-Popescu form: Alice measures with Kraus sqrt(E), sqrt(1-E)
// and Bob applies a unitary conditioned on the outcome.
DensityMatrix lo_popescu(const PureState& phi, Rng& rng) {
  const int da = phi.dims()[0];
  const int db = phi.dims()[1];
  const Matrix e = random_effect(da, rng);
  const Matrix kraus[2] = {psd_sqrt(e), psd_sqrt(Matrix::Identity(da, da) - e)};
  Matrix out = Matrix::Zero(phi.dim(), phi.dim());
  for (const Matrix& k : kraus) {
    const Matrix op = kron(k, random_unitary(db, rng));
    const Vector v = op * phi.amplitudes();
    out += v * v.adjoint();
  }
  return DensityMatrix(phi.dims(), out, false, 1e-8);
}

}  // namespace

TEST_CASE("cap solver") {
  SUBCASE("cap at the largest entry returns p") {
    const CapSolution s = min_infidelity_for_cap(std::vector<double>{0.7, 0.2, 0.1}, 0.7, 3);
    CHECK(s.fidelity == doctest::Approx(1.0));
    CHECK(s.q[0] == doctest::Approx(0.7));
    CHECK(s.q[2] == doctest::Approx(0.1));
  }
  SUBCASE("mass moves to the zero-support coordinate") {
    const CapSolution s = min_infidelity_for_cap(std::vector<double>{1.0, 0.0}, 0.5, 2);
    CHECK(s.q[0] == doctest::Approx(0.5));
    CHECK(s.q[1] == doctest::Approx(0.5));
    CHECK(s.fidelity == doctest::Approx(std::sqrt(0.5)));
  }
  SUBCASE("two-level example") {
    const CapSolution s = min_infidelity_for_cap(std::vector<double>{0.7, 0.3}, 0.5, 2);
    CHECK(s.q[0] == doctest::Approx(0.5));
    CHECK(s.fidelity == doctest::Approx(std::sqrt(0.35) + std::sqrt(0.15)).epsilon(1e-12));
  }
  SUBCASE("infeasible cap") {
    try {
      min_infidelity_for_cap(std::vector<double>{0.5, 0.5}, 0.4, 2);
      FAIL("cap below 1/d accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::infeasible);
    }
  }
  SUBCASE("optimal against random competitors") {
    Rng rng(2);
    for (int t = 0; t < 200; ++t) {
      const int d = rng.uniform_int(2, 4);
      const std::vector<double> p = random_simplex_point(d, rng);
      const double cap = 1.0 / d + (1.0 - 1.0 / d) * rng.uniform();
      const CapSolution s = min_infidelity_for_cap(p, cap, d);
      double total = 0.0;
      for (double x : s.q) {
        CHECK(x <= cap + 1e-12);
        total += x;
      }
      CHECK(total == doctest::Approx(1.0));
      for (int k = 0; k < 20; ++k) {
        std::vector<double> q = random_simplex_point(d, rng);
        if (*std::max_element(q.begin(), q.end()) > cap) continue;
        double f = 0.0;
        for (int i = 0; i < d; ++i) f += std::sqrt(p[i] * q[i]);
        CHECK(f <= s.fidelity + 1e-12);
      }
    }
  }
}

TEST_CASE("smoothed min-entropy") {
  CHECK(smooth_min_entropy(diag_state({0.5, 0.5}), 0.3).value.value == doctest::Approx(1.0));

  const SmoothedValue v = smooth_min_entropy(diag_state({1.0, 0.0}), 0.1);
  CHECK(v.value.value == doctest::Approx(-std::log2(0.99)).epsilon(1e-9));
  CHECK(v.value.value == doctest::Approx(0.014500).epsilon(1e-4));
  CHECK(v.kind == SmoothedKind::exact);

  OracleConfig fine;
  fine.grid_resolution = 1e-4;
  CHECK(std::abs(oracle_smooth_min_entropy(std::vector<double>{1.0, 0.0}, 0.1, fine) - v.value.value) < 1e-3);

  const std::vector<double> p73{0.7, 0.3};
  const double oracle = oracle_smooth_min_entropy(p73, 0.2, OracleConfig{});
  CHECK(std::abs(smooth_min_entropy(diag_state(p73), 0.2).value.value - oracle) <= 1e-2);

  const DensityMatrix rho = random_density_matrix({3}, 3, 4);
  CHECK(smooth_min_entropy(rho, 0.0).value.value == doctest::Approx(min_entropy(rho).value).epsilon(1e-12));
  CHECK_THROWS_AS(smooth_min_entropy(rho, 1.5), Error);
  CHECK_THROWS_AS(smooth_min_entropy(rho, -0.1), Error);

  SUBCASE("witness is a ball member and reproduces the value") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      const DensityMatrix r = random_density_matrix({3}, 1 + seed % 3, seed);
      for (double eps : {0.05, 0.1, 0.3}) {
        const SmoothedValue s = smooth_min_entropy(r, eps);
        REQUIRE(s.witness);
        const DensityMatrix w(r.dims(), *s.witness, false, 1e-8);
        CHECK(fid_sq(r, *s.witness) >= 1.0 - eps * eps - 1e-8);
        CHECK(std::abs(min_entropy(w).value - s.value.value) < 1e-8);
        CHECK(s.value.value <= std::log2(3.0) + 1e-12);
      }
    }
  }
  SUBCASE("monotone in eps") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const DensityMatrix r = random_density_matrix({4}, 4, seed);
      double prev = -1.0;
      for (double eps = 0.0; eps <= 1.0; eps += 0.05) {
        const double x = smooth_min_entropy(r, eps).value.value;
        CHECK(x >= prev - 1e-10);
        prev = x;
      }
    }
  }
}

TEST_CASE("state-smoothed zero-coherent information") {
  CHECK(state_smoothed_I0(maximally_entangled(3).density(), 0.0).value.value == doctest::Approx(std::log2(3.0)));

  const DensityMatrix phi = test::schmidt_pair(0.6).density();
  const SmoothedValue s = state_smoothed_I0(phi, 0.1);
  CHECK(s.kind == SmoothedKind::exact);
  CHECK(s.value.value == doctest::Approx(smooth_min_entropy(diag_state({0.6, 0.4}), 0.1).value.value).epsilon(1e-12));

  const DensityMatrix noise = DensityMatrix::maximally_mixed({2, 2});
  const SmoothedValue m = state_smoothed_I0(noise, 0.1);
  CHECK(m.kind == SmoothedKind::lower_bound);
  CHECK(m.value.value >= -1.0 - 1e-12);

  SUBCASE("witnesses") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      const bool pure = seed % 2 == 0;
      const DensityMatrix r = random_density_matrix({2, 3}, pure ? 1 : 3, seed);
      for (double eps : {0.0, 0.1, 0.3}) {
        const SmoothedValue v = state_smoothed_I0(r, eps);
        REQUIRE(v.witness);
        CHECK(fid_sq(r, *v.witness) >= 1.0 - eps * eps - 1e-8);
        const DensityMatrix w(r.dims(), *v.witness, false, 1e-8);
        CHECK(std::abs(zero_coherent_information(w).value - v.value.value) < 1e-8);
        if (eps == 0.0) CHECK(v.value.value == doctest::Approx(zero_coherent_information(r).value).epsilon(1e-9));
      }
    }
  }
  SUBCASE("monotone in eps") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const DensityMatrix r = random_density_matrix({2, 2}, 1 + seed % 3, seed + 100);
      double prev = -10.0;
      for (double eps = 0.0; eps <= 0.6; eps += 0.05) {
        const double x = state_smoothed_I0(r, eps).value.value;
        CHECK(x >= prev - 1e-10);
        prev = x;
      }
    }
  }
}

TEST_CASE("operator-smoothed zero-coherent information") {
  SUBCASE("eps = 0 collapses to I0") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const DensityMatrix r = random_density_matrix({2, 2}, 1 + seed % 4, seed);
      const OperatorSmoothedBounds b = op_smoothed_I0(r, 0.0, quick_search());
      const double i0 = zero_coherent_information(r).value;
      CHECK(b.lower.value.value == doctest::Approx(i0).epsilon(1e-12));
      REQUIRE(b.upper);
      CHECK(b.upper->value.value == doctest::Approx(i0).epsilon(1e-12));
    }
  }
  SUBCASE("pure upper bound formula") {
    const OperatorSmoothedBounds b = op_smoothed_I0(test::schmidt_pair(0.6).density(), 0.04);
    REQUIRE(b.upper);
    const double expected = smooth_min_entropy(diag_state({0.6, 0.4}), 0.4).value.value - std::log2(0.96);
    CHECK(b.upper->value.value == doctest::Approx(expected).epsilon(1e-12));
    CHECK(b.upper->kind == SmoothedKind::upper_bound);
  }
  SUBCASE("pure sweep: I0 <= lower <= upper, witness reproduces") {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
      const PureState phi = random_pure_state({3, 3}, seed);
      const DensityMatrix r = phi.density();
      for (double eps : {0.01, 0.05, 0.2}) {
        const OperatorSmoothedBounds b = op_smoothed_I0(r, eps);
        REQUIRE(b.upper);
        CHECK(b.lower.value.value >= zero_coherent_information(r).value - 1e-9);
        CHECK(b.lower.value.value <= b.upper->value.value + 1e-9);
        REQUIRE(b.lower.witness);
        const Matrix& p = *b.lower.witness;
        CHECK((p * r.matrix()).trace().real() >= 1.0 - eps - 1e-9);
        CHECK(std::abs(operator_objective(p, r).value - b.lower.value.value) < 1e-8);
      }
    }
  }
  SUBCASE("mixed witnesses and monotonicity") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      const DensityMatrix r = random_density_matrix({2, 2}, 3, seed + 50);
      double prev = -10.0;
      for (double eps : {0.0, 0.02, 0.1, 0.3}) {
        const OperatorSmoothedBounds b = op_smoothed_I0(r, eps, quick_search());
        CHECK(b.lower.value.value >= prev - 1e-12);
        prev = b.lower.value.value;
        REQUIRE(b.lower.witness);
        const Matrix& p = *b.lower.witness;
        const RealVector ev = eigh(p).values;
        CHECK(ev.maxCoeff() <= 1.0 + 1e-9);
        CHECK(ev.minCoeff() >= -1e-9);
        CHECK((p * r.matrix()).trace().real() >= 1.0 - eps - 1e-9);
        CHECK(std::abs(operator_objective(p, r).value - b.lower.value.value) < 1e-8);
      }
    }
  }
}

TEST_CASE("one-way LOCC never beats the pure-state upper expression") {
  Rng rng(77);
  for (int t = 0; t < 30; ++t) {
    const PureState phi = random_pure_state({2, 2}, rng);
    const DensityMatrix out = lo_popescu(phi, rng);
    const std::vector<double> lambda = schmidt_spectrum(phi);
    for (double eps : {0.01, 0.04}) {
      const double lower = op_smoothed_I0(out, eps, quick_search()).lower.value.value;
      CHECK(lower <= pure_op_smoothed_upper(lambda, 2, 2.0 * std::sqrt(eps)) + 1e-9);
    }
  }
}
