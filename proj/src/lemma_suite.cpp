#include <algorithm>
#include <array>
#include <cmath>

#include "oneshot/error.hpp"
#include "oneshot/metrics.hpp"
#include "oneshot/oracles.hpp"
#include "oneshot/random.hpp"
#include "oneshot/smoothing.hpp"

namespace oneshot {
namespace {

enum Check : int {
  fuchs_van_de_graaf,
  gentle_measurement,
  pure_state_fidelity,
  normalized_post_measurement,
  pure_witness_operator,
  pure_witness_spectral,
  state_smoothing_pure,
  operator_smoothing_pure_upper,
  check_count
};

constexpr const char* kCheckNames[check_count] = {
    "fuchs_van_de_graaf",        "gentle_measurement",          "pure_state_fidelity",
    "normalized_post_measurement", "pure_witness_operator",       "pure_witness_spectral",
    "state_smoothing_pure",      "operator_smoothing_pure_upper",
};

using Slacks = std::array<double, check_count>;

Dims random_dims(Rng& rng) {
  static const Dims options[] = {{2, 2}, {2, 3}, {3, 2}, {3, 3}};
  return options[rng.uniform_int(0, 3)];
}

Slacks run_trial(Rng& rng) {
  Slacks s{};

  {
    const int d = rng.uniform_int(2, 4);
    const DensityMatrix rho = random_density_matrix({d}, rng.uniform_int(1, d), rng);
    const DensityMatrix sigma = random_density_matrix({d}, rng.uniform_int(1, d), rng);
    const double f = std::min(1.0, fidelity(rho, sigma));
    const double half = 0.5 * trace_distance(rho, sigma);
    s[fuchs_van_de_graaf] = std::min(half - (1.0 - f), std::sqrt(1.0 - f * f) - half);
  }

  {
    const int d = rng.uniform_int(2, 4);
    const DensityMatrix rho = random_density_matrix({d}, rng.uniform_int(1, d), rng);
    const Matrix effect = random_effect(d, rng);
    // Half of the trials shrink rho to a subnormalized operator.
    const double scale = rng.uniform() < 0.5 ? 1.0 : 0.2 + 0.8 * rng.uniform();
    const Matrix r = scale * rho.matrix();
    const double delta = std::max(0.0, 1.0 - (r * effect).trace().real());
    const Matrix root = psd_sqrt(effect);
    const Matrix diff = r - root * r * root;
    s[gentle_measurement] = 2.0 * std::sqrt(delta) - trace_norm(diff);
  }

  {
    const int d = rng.uniform_int(2, 4);
    const PureState phi = random_pure_state({d}, rng);
    const Matrix effect = random_effect(d, rng);
    const double eps = std::max(0.0, 1.0 - (phi.amplitudes().adjoint() * effect * phi.amplitudes())(0, 0).real());
    const double f = std::abs((phi.amplitudes().adjoint() * psd_sqrt(effect) * phi.amplitudes())(0, 0));
    s[pure_state_fidelity] = f - (1.0 - std::sqrt(eps));
  }

  {
    const int d = rng.uniform_int(2, 4);
    const DensityMatrix rho = random_density_matrix({d}, rng.uniform_int(1, d), rng);
    const Matrix effect = random_effect(d, rng);
    const double accepted = (effect * rho.matrix()).trace().real();
    const double eps = std::max(0.0, 1.0 - accepted);
    const Matrix root = psd_sqrt(effect);
    const DensityMatrix omega({d}, root * rho.matrix() * root / accepted, false, 1e-6);
    s[normalized_post_measurement] = fidelity(omega, rho) - (1.0 - 2.0 * std::sqrt(eps));
  }

  {
    const Dims dims = random_dims(rng);
    const int d = total_dimension(dims);
    const DensityMatrix rho = random_density_matrix(dims, rng.uniform_int(2, d), rng);
    const PureState psi = random_pure_state(dims, rng);
    const DensityMatrix psi_rho = psi.density();
    s[pure_witness_operator] =
        operator_objective(psi.projector(), rho).value - zero_coherent_information(psi_rho).value;

    // psi = top eigenvector of rho and eps = 1 - lambda_max put psi in P(rho; eps).
    const HermitianEigenSystem es = eigh(rho.matrix());
    const PureState top = PureState::normalized(dims, es.vectors.col(0));
    SearchOptions opts;
    opts.restarts = 2;
    opts.levels = 8;
    opts.exec = Execution::serial;
    const double eps = std::clamp(1.0 - es.values[0], 0.0, 1.0);
    const OperatorSmoothedBounds b = op_smoothed_I0(rho, eps, opts);
    s[pure_witness_spectral] = b.lower.value.value - zero_coherent_information(top.density()).value;
  }

  {
    const Dims dims = random_dims(rng);
    const PureState phi = random_pure_state(dims, rng);
    const DensityMatrix rho = phi.density();
    const double eps = 0.2 * rng.uniform();
    const std::vector<double> lambda = schmidt_spectrum(phi);
    const int ambient = schmidt_ambient_dim(dims);
    const double smin = smooth_min_entropy_spectrum(lambda, eps, ambient).value;
    s[state_smoothing_pure] = state_smoothed_I0(rho, eps).value.value - smin;
    const double upper =
        smooth_min_entropy_spectrum(lambda, std::min(1.0, 2.0 * std::sqrt(eps)), ambient).value - std::log2(1.0 - eps);
    s[operator_smoothing_pure_upper] = upper - op_smoothed_I0(rho, eps).lower.value.value;
  }
  return s;
}

}  // namespace

bool LemmaReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const LemmaCheck& c) { return c.violations == 0; });
}

double LemmaReport::max_violation() const {
  double v = 0.0;
  for (const LemmaCheck& c : checks) v = std::max(v, c.max_violation);
  return v;
}

LemmaReport verify_lemma_suite(int trials, std::uint64_t seed, const OracleConfig& cfg) {
  require(trials > 0, ErrorCode::invalid_argument, "trials must be positive");
  std::vector<Slacks> results(trials);
  for_each_index(cfg.exec, trials, [&](std::int64_t t) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    results[t] = run_trial(rng);
  });

  LemmaReport report;
  for (int c = 0; c < check_count; ++c) {
    LemmaCheck check;
    check.name = kCheckNames[c];
    check.trials = trials;
    double total = 0.0;
    for (const Slacks& s : results) {
      const double slack = s[c];
      total += slack;
      check.min_slack = std::min(check.min_slack, slack);
      check.max_violation = std::max(check.max_violation, -slack);
      if (slack < -report.violation_tol) ++check.violations;
    }
    check.mean_slack = total / trials;
    report.checks.push_back(check);
  }
  return report;
}

}  // namespace oneshot
