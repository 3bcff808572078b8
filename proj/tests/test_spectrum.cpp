#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "helpers.hpp"
#include "oneshot/error.hpp"
#include "oneshot/metrics.hpp"
#include "oneshot/random.hpp"
#include "oneshot/spectrum.hpp"

using namespace oneshot;
using test::diag_state;

namespace {

PureEnsemble product_ensemble(const PureEnsemble& a, const PureEnsemble& b) {
  std::vector<EnsembleMember> m;
  for (const auto& x : a.members())
    for (const auto& y : b.members()) m.push_back({x.weight * y.weight, bipartite_tensor(x.state, y.state)});
  return PureEnsemble(std::move(m));
}

// RAII override of the dimension-cap environment variable.
class CapOverride {
 public:
  explicit CapOverride(const char* value) {
    if (const char* old = std::getenv("ONESHOT_DIM_CAP")) saved_ = old;
    ::setenv("ONESHOT_DIM_CAP", value, 1);
  }
  ~CapOverride() {
    if (saved_.empty())
      ::unsetenv("ONESHOT_DIM_CAP");
    else
      ::setenv("ONESHOT_DIM_CAP", saved_.c_str(), 1);
  }

 private:
  std::string saved_;
};

}  // namespace

TEST_CASE("divergence diagnostic") {
  const DensityMatrix rho = random_density_matrix({2}, 2, 3);
  CHECK(divergence_diagnostic(rho, rho, 1, -1.0) == doctest::Approx(0.5));
  CHECK(divergence_diagnostic(diag_state({1.0, 0.0}), diag_state({0.5, 0.5}), 1, 0.5) ==
        doctest::Approx(1.0 - std::sqrt(2.0) / 2.0).epsilon(1e-12));
  CHECK(divergence_diagnostic(diag_state({1.0, 0.0}), diag_state({0.5, 0.5}), 1, 0.5) ==
        doctest::Approx(0.29289).epsilon(1e-5));
  const DensityMatrix sigma = random_density_matrix({2}, 2, 4);
  CHECK(divergence_diagnostic(rho, sigma, 2, -40.0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(divergence_diagnostic(rho, sigma, 2, 40.0) == doctest::Approx(0.0).scale(1.0));

  SUBCASE("type-class path matches the dense path") {
    Rng rng(8);
    for (int t = 0; t < 10; ++t) {
      const DensityMatrix a = diag_state(random_simplex_point(2, rng));
      const DensityMatrix b = diag_state(random_simplex_point(2, rng));
      for (int n = 1; n <= 4; ++n) {
        for (double g : {-2.0, -0.3, 0.0, 0.4}) {
          CHECK(divergence_diagnostic(a, b, n, g) ==
                doctest::Approx(divergence_diagnostic_dense(a, b, n, g)).epsilon(1e-10));
        }
      }
    }
  }
  SUBCASE("noncommuting inputs") {
    for (int n = 1; n <= 3; ++n) {
      const double v = divergence_diagnostic(rho, sigma, n, 0.1);
      CHECK(v == doctest::Approx(divergence_diagnostic_dense(rho, sigma, n, 0.1)).epsilon(1e-12));
      CHECK(v >= 0.0);
      CHECK(v <= 1.0 + 1e-9);
    }
  }
  SUBCASE("dimension cap") {
    DiagnosticOptions opts;
    opts.dimension_cap = 4;
    CHECK_NOTHROW(divergence_diagnostic(rho, sigma, 2, 0.0, opts));
    try {
      divergence_diagnostic(rho, sigma, 3, 0.0, opts);
      FAIL("cap not enforced");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::invalid_argument);
    }
    CHECK_THROWS_AS(divergence_diagnostic(diag_state({0.5, 0.5}), diag_state({0.5, 0.5}), 3, 0.0, opts), Error);
    CHECK_THROWS_AS(divergence_diagnostic(rho, sigma, 0, 0.0), Error);
  }
  SUBCASE("cap from the environment") {
    {
      const CapOverride cap("16");
      CHECK(default_dimension_cap() == 16);
      CHECK_THROWS_AS(divergence_diagnostic(rho, sigma, 5, 0.0, DiagnosticOptions{}), Error);
    }
    {
      const CapOverride cap("lots");
      CHECK_THROWS_AS(default_dimension_cap(), Error);
    }
  }
}

TEST_CASE("rate estimates") {
  const GammaGrid grid;
  SUBCASE("identical states follow 1 - 2^{n gamma}") {
    const DensityMatrix rho = random_density_matrix({2}, 2, 11);
    for (double tol : {0.05, 0.2}) {
      const SpectrumEstimate est = inf_divergence_rate_estimate(rho, rho, 5, tol, grid);
      for (int n = 1; n <= 5; ++n) {
        double expected = -1e300;
        for (double g : grid.points())
          if (g <= std::log2(tol) / n) expected = std::max(expected, g);
        REQUIRE(est.rate_estimate[n - 1]);
        CHECK(*est.rate_estimate[n - 1] == expected);
      }
    }
  }
  SUBCASE("commuting pairs trend upward") {
    const DensityMatrix mixed = diag_state({0.5, 0.5});
    for (const DensityMatrix& rho : {diag_state({0.9, 0.1}), diag_state({1.0, 0.0})}) {
      const SpectrumEstimate est = inf_divergence_rate_estimate(rho, mixed, 5, 0.05, grid);
      const double s = relative_entropy(rho, mixed).value;
      for (int n = 1; n <= 5; ++n) {
        REQUIRE(est.rate_estimate[n - 1]);
        CHECK(*est.rate_estimate[n - 1] <= s + 1e-12);
        if (n > 1) CHECK(*est.rate_estimate[n - 1] >= *est.rate_estimate[n - 2]);
      }
      for (const auto& curve : est.curves) {
        for (std::size_t k = 1; k < curve.size(); ++k) CHECK(curve[k] <= curve[k - 1] + 1e-12);
        for (double v : curve) CHECK(v <= 1.0 + est.tol);
      }
    }
  }
  SUBCASE("grid validation") {
    const DensityMatrix rho = diag_state({0.9, 0.1});
    CHECK_THROWS_AS(inf_divergence_rate_estimate(rho, rho, 2, 0.05, GammaGrid{1.0, 0.0, 0.01}), Error);
    CHECK(GammaGrid{0.0, 1.0, 0.25}.points().size() == 5);
  }
}

TEST_CASE("qc states and qc smoothing") {
  const PureState bell = maximally_entangled(2);
  const PureEnsemble twins({{0.5, bell}, {0.5, bell}});
  const PureEnsemble mixed({{0.5, bell}, {0.5, test::ket00()}});

  const QCState qc = qc_state(mixed);
  CHECK(qc.register_dim() == 2);
  const DensityMatrix dense = qc.dense();
  CHECK(dense.dims() == Dims{2, 2, 2});
  CHECK(dense.trace() == doctest::Approx(1.0));

  for (double eps : {0.0, 0.05, 0.3}) CHECK(qc_smoothed_I0(twins, eps) == doctest::Approx(1.0));
  CHECK(qc_smoothed_I0(mixed, 0.0) == doctest::Approx(0.0).scale(1.0));

  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    const PureEnsemble e({{0.4, random_pure_state({2, 2}, rng)}, {0.6, random_pure_state({2, 2}, rng)}});
    double prev = -1.0;
    for (double eps : {0.0, 0.02, 0.1, 0.4}) {
      const double v = qc_smoothed_I0(e, eps);
      CHECK(v >= prev - 1e-12);
      prev = v;
      CHECK(v == doctest::Approx(ed_ensemble_lower(e, 2.0 * eps).unfloored).epsilon(1e-12));
    }
    CHECK(qc_smoothed_I0(product_ensemble(e, e), 0.0) == doctest::Approx(2.0 * qc_smoothed_I0(e, 0.0)).epsilon(1e-12));
  }
  const PureEnsemble one({{1.0, bell}});
  CHECK(qc_smoothed_I0(product_ensemble(one, one), 0.1) == doctest::Approx(2.0 * qc_smoothed_I0(one, 0.1)));
}

TEST_CASE("entanglement of assistance references") {
  CHECK(asymptotic_reference(maximally_entangled(2).density()) == doctest::Approx(1.0));
  CHECK(asymptotic_reference(test::classically_correlated()) == doctest::Approx(1.0));
  CHECK(asymptotic_reference(test::ket00().density()) == doctest::Approx(0.0).scale(1.0));

  DecompositionOptions opts;
  opts.restarts = 24;
  const PureState phi = test::schmidt_pair(0.7);
  const double h = -0.7 * std::log2(0.7) - 0.3 * std::log2(0.3);
  CHECK(entropic_eoa(phi.density(), opts).value == doctest::Approx(h).epsilon(1e-9));
  CHECK(entropic_eoa(test::classically_correlated(), opts).value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(entropic_eoa(DensityMatrix::maximally_mixed({2, 2}), opts).value == doctest::Approx(1.0).epsilon(1e-6));

  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const DensityMatrix rho = random_density_matrix({2, 2}, 2 + seed % 3, seed);
    const EntropicEoa e = entropic_eoa(rho, opts);
    CHECK(e.value <= asymptotic_reference(rho) + 1e-8);
    CHECK(e.value >= e.seed_value - 1e-12);
    CHECK((e.witness.average().matrix() - rho.matrix()).norm() < 1e-9);
    CHECK(average_entanglement(e.witness) == doctest::Approx(e.value).epsilon(1e-10));
  }
}
