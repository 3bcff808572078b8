#include "oneshot/distillation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "oneshot/error.hpp"
#include "oneshot/metrics.hpp"
#include "oneshot/smoothing.hpp"

namespace oneshot {
namespace {

constexpr double kBudgetTol = 1e-10;
constexpr int kBisectionSteps = 60;
constexpr double kGoldenTol = 1e-10;

struct MemberSpectrum {
  double weight;
  std::vector<double> lambda;  // squared Schmidt coefficients, padded
  SchmidtDecomposition basis;
};

std::vector<MemberSpectrum> member_spectra(const PureEnsemble& e) {
  std::vector<MemberSpectrum> out;
  out.reserve(e.size());
  for (const EnsembleMember& m : e.members()) {
    SchmidtDecomposition s = schmidt(m.state);
    out.push_back({m.weight, schmidt_spectrum(m.state), std::move(s)});
  }
  return out;
}

double capped_fidelity(const std::vector<double>& lambda, double cap, int ambient) {
  return min_infidelity_for_cap(lambda, std::min(cap, 1.0), ambient).fidelity;
}

PureEnsemble capped_ensemble(const PureEnsemble& e, const std::vector<MemberSpectrum>& spectra,
                             double cap, int ambient) {
  std::vector<EnsembleMember> members;
  for (const MemberSpectrum& m : spectra) {
    const CapSolution sol = min_infidelity_for_cap(m.lambda, std::min(cap, 1.0), ambient);
    members.push_back({m.weight, PureState::normalized(e.dims(), schmidt_compose(m.basis, sol.q))});
  }
  return PureEnsemble(std::move(members));
}

void check_eps(double eps) {
  require(eps >= 0.0 && eps <= 1.0, ErrorCode::invalid_argument, "eps must lie in [0, 1]");
}

// max over c of sqrt(c) * O(min(1, cap/c)) for one member; returns (value, c).
std::pair<double, double> subnormalized_fidelity(const std::vector<double>& lambda, double cap,
                                                 int ambient) {
  const double top = *std::max_element(lambda.begin(), lambda.end());
  const double c_lo = std::min(1.0, cap / top);
  const double c_hi = std::min(1.0, ambient * cap);
  const auto h = [&](double c) { return std::sqrt(c) * capped_fidelity(lambda, cap / c, ambient); };

  double best_c = c_lo;
  double best = h(c_lo);
  if (c_hi > c_lo) {
    const double hv = h(c_hi);
    if (hv > best) {
      best = hv;
      best_c = c_hi;
    }
    const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = c_lo;
    double b = c_hi;
    double x1 = b - ratio * (b - a);
    double x2 = a + ratio * (b - a);
    double f1 = h(x1);
    double f2 = h(x2);
    while (b - a > kGoldenTol) {
      if (f1 < f2) {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + ratio * (b - a);
        f2 = h(x2);
      } else {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - ratio * (b - a);
        f1 = h(x1);
      }
    }
    for (auto [x, f] : {std::pair{x1, f1}, std::pair{x2, f2}}) {
      if (f > best) {
        best = f;
        best_c = x;
      }
    }
  }
  return {best, best_c};
}

}  // namespace

PureEnsemble::PureEnsemble(std::vector<EnsembleMember> members, bool allow_subnormalized, double tol)
    : members_(std::move(members)), subnormalized_(false) {
  require(!members_.empty(), ErrorCode::invalid_argument, "ensemble has no members");
  double total = 0.0;
  const Dims& dims = members_.front().state.dims();
  require(dims.size() == 2, ErrorCode::dimension_mismatch, "ensemble members must be bipartite");
  for (std::size_t i = 0; i < members_.size(); ++i) {
    const EnsembleMember& m = members_[i];
    require(m.weight > 0.0, ErrorCode::invalid_argument,
            "ensemble weight " + std::to_string(i) + " is not positive");
    require(m.state.dims() == dims, ErrorCode::dimension_mismatch,
            "ensemble member " + std::to_string(i) + " has different dims");
    if (!m.state.is_normalized(tol)) {
      require(allow_subnormalized, ErrorCode::invalid_state,
              "ensemble member " + std::to_string(i) + " is not normalized");
      subnormalized_ = true;
    }
    total += m.weight;
  }
  require(std::abs(total - 1.0) <= tol, ErrorCode::invalid_state,
          "ensemble weights sum to " + std::to_string(total) + ", not 1");
}

DensityMatrix PureEnsemble::average() const {
  const int d = members_.front().state.dim();
  Matrix avg = Matrix::Zero(d, d);
  for (const EnsembleMember& m : members_) avg += m.weight * m.state.projector();
  return DensityMatrix(dims(), avg, subnormalized_);
}

double floor_log2_integer(double bits) {
  require(bits >= 0.0, ErrorCode::invalid_argument, "floor_log2_integer needs a nonnegative value");
  if (std::isinf(bits)) return bits;
  return std::log2(std::floor(std::exp2(bits) * (1.0 + 1e-9)));
}

BoundReport ed_pure_bounds(const PureState& phi, double eps, UpperBoundVariant variant) {
  check_eps(eps);
  require(phi.is_normalized(), ErrorCode::invalid_state, "ed_pure_bounds needs a normalized state");
  const int ambient = schmidt_ambient_dim(phi.dims());
  const std::vector<double> lambda = schmidt_spectrum(phi);
  const double eps_prime = std::min(1.0, std::sqrt(2.0 * std::sqrt(eps)));

  BoundReport r;
  r.eps = eps;
  r.method = variant == UpperBoundVariant::with_correction ? "pure-state sandwich"
                                                           : "pure-state sandwich (uncorrected upper)";
  r.eps_derived = {{"eps_prime", eps_prime}, {"two_sqrt_eps", 2.0 * std::sqrt(eps)}};

  const SpectrumSmoothing low = smooth_min_entropy_spectrum(lambda, eps, ambient);
  r.lower = eps == 0.0 ? std::log2(static_cast<double>(distill_rank_from_spectrum(lambda)))
                       : floor_log2_integer(low.value);
  const Vector w = schmidt_compose(schmidt(phi), low.q);
  r.witness_state = Matrix(w * w.adjoint());

  const double core = smooth_min_entropy_spectrum(lambda, eps_prime, ambient).value;
  if (eps >= 0.25) r.warnings.push_back("eps >= 0.25: the log2(1 - 2 sqrt(eps)) correction diverges");
  if (variant == UpperBoundVariant::without_correction)
    r.upper = core;
  else
    r.upper = eps >= 0.25 ? std::numeric_limits<double>::infinity()
                          : core - std::log2(1.0 - 2.0 * std::sqrt(eps));
  return r;
}

double hashing_bound_pure(const PureState& phi, double eps) {
  check_eps(eps);
  const int ambient = schmidt_ambient_dim(phi.dims());
  const double smoothed = smooth_min_entropy_spectrum(schmidt_spectrum(phi), eps / 8.0, ambient).value;
  const double x = smoothed + std::log2(1.0 / phi.dims()[0] + eps * eps / 4.0);
  return x >= 0.0 ? floor_log2_integer(x) : x;
}

double f_min(const PureEnsemble& ensemble) {
  double out = std::numeric_limits<double>::infinity();
  for (const EnsembleMember& m : ensemble.members()) {
    const SchmidtDecomposition s = schmidt(m.state);
    out = std::min(out, -std::log2(s.coefficients[0] * s.coefficients[0]));
  }
  return out;
}

EnsembleLowerResult ensemble_budget_allocation(const PureEnsemble& ensemble, double budget) {
  require(!ensemble.subnormalized(), ErrorCode::invalid_state,
          "budget allocation needs a normalized ensemble");
  require(budget >= 0.0, ErrorCode::invalid_argument, "budget must be nonnegative");
  const int ambient = schmidt_ambient_dim(ensemble.dims());
  const std::vector<MemberSpectrum> spectra = member_spectra(ensemble);

  const auto feasible = [&](double cap) {
    double cost = 0.0;
    for (const MemberSpectrum& m : spectra) cost += m.weight * (1.0 - capped_fidelity(m.lambda, cap, ambient));
    return cost <= budget + kBudgetTol;
  };

  if (budget == 0.0) {
    // No smoothing: the members themselves are the only admissible choice.
    int rank = ambient;
    for (const MemberSpectrum& m : spectra) rank = std::min(rank, distill_rank_from_spectrum(m.lambda));
    return {std::log2(static_cast<double>(rank)), f_min(ensemble), budget, ensemble, ensemble};
  }

  int rank = 1;
  for (int m = ambient; m > 1; --m) {
    if (feasible(1.0 / m)) {
      rank = m;
      break;
    }
  }

  double lo = 0.0;
  double hi = std::log2(static_cast<double>(ambient));
  if (feasible(std::exp2(-hi))) {
    lo = hi;
  } else {
    for (int i = 0; i < kBisectionSteps; ++i) {
      const double mid = 0.5 * (lo + hi);
      (feasible(std::exp2(-mid)) ? lo : hi) = mid;
    }
  }
  return {std::log2(static_cast<double>(rank)), lo, budget,
          capped_ensemble(ensemble, spectra, 1.0 / rank, ambient),
          capped_ensemble(ensemble, spectra, std::exp2(-lo), ambient)};
}

EnsembleLowerResult ed_ensemble_lower(const PureEnsemble& ensemble, double eps) {
  check_eps(eps);
  return ensemble_budget_allocation(ensemble, eps / 2.0);
}

EnsembleUpperResult ed_ensemble_upper(const PureEnsemble& ensemble, double eps) {
  check_eps(eps);
  require(!ensemble.subnormalized(), ErrorCode::invalid_state, "ed_ensemble_upper needs a normalized ensemble");
  const double budget = std::sqrt(2.0 * std::sqrt(eps));
  if (budget >= 1.0) return {std::numeric_limits<double>::infinity(), budget, std::nullopt};

  if (budget == 0.0) return {f_min(ensemble), budget, ensemble};

  const int ambient = schmidt_ambient_dim(ensemble.dims());
  const std::vector<MemberSpectrum> spectra = member_spectra(ensemble);
  const auto cost = [&](double t) {
    double c = 0.0;
    for (const MemberSpectrum& m : spectra)
      c += m.weight * (1.0 - subnormalized_fidelity(m.lambda, std::exp2(-t), ambient).first);
    return c;
  };

  // Beyond this level even the uniform spectrum at norm^2 (1 - budget)^2 fails.
  double hi = std::log2(static_cast<double>(ambient)) - 2.0 * std::log2(1.0 - budget);
  double lo = 0.0;
  if (cost(hi) <= budget + kBudgetTol) {
    lo = hi;
  } else {
    for (int i = 0; i < kBisectionSteps; ++i) {
      const double mid = 0.5 * (lo + hi);
      (cost(mid) <= budget + kBudgetTol ? lo : hi) = mid;
    }
  }

  std::vector<EnsembleMember> members;
  const double cap = std::exp2(-lo);
  for (std::size_t i = 0; i < spectra.size(); ++i) {
    const MemberSpectrum& m = spectra[i];
    const double c = subnormalized_fidelity(m.lambda, cap, ambient).second;
    const CapSolution sol = min_infidelity_for_cap(m.lambda, std::min(1.0, cap / c), ambient);
    const Vector v = std::sqrt(c) * schmidt_compose(m.basis, sol.q);
    members.push_back({m.weight, PureState(ensemble.dims(), v)});
  }
  return {hi, budget, PureEnsemble(std::move(members), true)};
}

BoundReport ed_ensemble_bounds(const PureEnsemble& ensemble, double eps) {
  EnsembleLowerResult low = ed_ensemble_lower(ensemble, eps);
  EnsembleUpperResult up = ed_ensemble_upper(ensemble, eps);
  BoundReport r;
  r.lower = low.value;
  r.upper = up.value;
  r.eps = eps;
  r.method = "ensemble budget allocation";
  r.eps_derived = {{"eps_prime", low.budget}, {"eps_double_prime", up.budget}};
  if (std::isinf(up.value)) r.warnings.push_back("sqrt(2 sqrt(eps)) >= 1: upper bound is vacuous");
  r.lower_witness = std::move(low.witness);
  r.upper_witness = std::move(up.witness);
  return r;
}

}  // namespace oneshot
