#include "oneshot/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "oneshot/error.hpp"
#include "oneshot/random.hpp"

namespace oneshot {
namespace {

constexpr double kCapBisectionTol = 1e-12;
constexpr double kFidelityFeasibilityTol = 1e-10;
constexpr double kMembershipTol = 1e-12;

void check_eps(double eps) {
  require(eps >= 0.0 && eps <= 1.0, ErrorCode::invalid_argument, "eps must lie in [0, 1]");
}

std::vector<double> to_vector(const RealVector& v) { return {v.data(), v.data() + v.size()}; }

// Water level c with sum_i min(lambda_i, c) = mass, lambda sorted descending.
double water_level(const std::vector<double>& lambda, double mass) {
  double tail = std::accumulate(lambda.begin(), lambda.end(), 0.0);
  for (std::size_t k = 1; k <= lambda.size(); ++k) {
    tail -= lambda[k - 1];
    const double c = (mass - tail) / static_cast<double>(k);
    const double next = k < lambda.size() ? lambda[k] : 0.0;
    if (c >= next) return std::max(c, 0.0);
  }
  return 0.0;
}

Matrix spectral_state(const Matrix& basis, const std::vector<double>& q) {
  const auto n = static_cast<Eigen::Index>(q.size());
  RealVector w(n);
  for (Eigen::Index k = 0; k < n; ++k) w[k] = q[k];
  return basis.leftCols(n) * w.asDiagonal() * basis.leftCols(n).adjoint();
}

bool is_pure(const DensityMatrix& rho, double rank_tol) { return numerical_rank(rho, rank_tol) == 1; }

PureState top_eigenvector(const DensityMatrix& rho) {
  const HermitianEigenSystem es = eigh(rho.matrix());
  return PureState::normalized(rho.dims(), es.vectors.col(0));
}

}  // namespace

CapSolution min_infidelity_for_cap(std::span<const double> p, double cap, int dim) {
  require(static_cast<int>(p.size()) <= dim, ErrorCode::dimension_mismatch,
          "min_infidelity_for_cap: spectrum longer than ambient dimension");
  require(cap > 0.0 && cap <= 1.0 + 1e-15, ErrorCode::invalid_argument,
          "min_infidelity_for_cap: cap must lie in (0, 1]");
  if (cap * dim < 1.0 - 1e-15) fail(ErrorCode::infeasible, "cap * dim < 1: no probability vector fits under the cap");

  std::vector<int> support;
  for (int i = 0; i < static_cast<int>(p.size()); ++i)
    if (p[i] > 0.0) support.push_back(i);
  require(!support.empty(), ErrorCode::invalid_argument, "min_infidelity_for_cap: p is zero");
  std::stable_sort(support.begin(), support.end(), [&](int a, int b) { return p[a] > p[b]; });

  CapSolution out{0.0, std::vector<double>(dim, 0.0)};
  const auto s = support.size();
  if (static_cast<double>(s) * cap <= 1.0) {
    for (int i : support) out.q[i] = cap;
    const int zeros = dim - static_cast<int>(s);
    const double surplus = 1.0 - static_cast<double>(s) * cap;
    if (zeros > 0 && surplus > 0.0) {
      std::vector<char> in_support(dim, 0);
      for (int i : support) in_support[i] = 1;
      for (int i = 0; i < dim; ++i)
        if (!in_support[i]) out.q[i] = surplus / zeros;
    }
  } else {
    // Suffix sums summed from the small end; subtracting from the total loses
    // the tiny tail entirely for near-pure spectra.
    std::vector<double> tail(s + 1, 0.0);
    for (std::size_t k = s; k-- > 0;) tail[k] = tail[k + 1] + p[support[k]];
    std::size_t k = 0;
    while (k + 1 < s && (1.0 - static_cast<double>(k) * cap) * p[support[k]] > cap * tail[k]) ++k;
    const double c = (1.0 - static_cast<double>(k) * cap) / tail[k];
    for (std::size_t j = 0; j < s; ++j)
      out.q[support[j]] = j < k ? cap : std::min(cap, c * p[support[j]]);
  }
  for (int i = 0; i < static_cast<int>(p.size()); ++i)
    if (p[i] > 0.0) out.fidelity += std::sqrt(p[i] * out.q[i]);
  return out;
}

SpectrumSmoothing smooth_min_entropy_spectrum(std::span<const double> p, double eps, int dim) {
  check_eps(eps);
  require(!p.empty(), ErrorCode::invalid_argument, "empty spectrum");
  const double top = *std::max_element(p.begin(), p.end());
  const double target = 1.0 - eps * eps;
  const auto feasible = [&](double cap) {
    const CapSolution sol = min_infidelity_for_cap(p, cap, dim);
    return sol.fidelity * sol.fidelity >= target - kFidelityFeasibilityTol;
  };

  double hi = top;
  if (eps > 0.0) {
    double lo = 1.0 / dim;
    if (feasible(lo)) {
      hi = lo;
    } else {
      while (hi - lo > kCapBisectionTol) {
        const double mid = 0.5 * (lo + hi);
        (feasible(mid) ? hi : lo) = mid;
      }
    }
  }
  CapSolution sol = min_infidelity_for_cap(p, hi, dim);
  return {-std::log2(hi), hi, std::move(sol.q), sol.fidelity};
}

SmoothedValue smooth_min_entropy(const DensityMatrix& rho, double eps) {
  check_eps(eps);
  require(!rho.subnormalized(), ErrorCode::invalid_state, "smooth_min_entropy needs a normalized state");
  const HermitianEigenSystem es = eigh(rho.matrix());
  std::vector<double> p = to_vector(es.values.cwiseMax(0.0));
  const SpectrumSmoothing sm = smooth_min_entropy_spectrum(p, eps, rho.dim());
  return {EntropyValue::of(sm.value), SmoothedKind::exact, {eps, BallKind::state_fidelity_ball},
          spectral_state(es.vectors, sm.q)};
}

// ---------------------------------------------------------------------------
// Zero-coherent information, state-smoothed.

SmoothedValue state_smoothed_I0(const DensityMatrix& rho_ab, double eps, const SearchOptions& opts) {
  check_eps(eps);
  require(rho_ab.subsystem_count() == 2, ErrorCode::dimension_mismatch,
          "state_smoothed_I0 needs a bipartite state");
  const SmoothingBudget budget{eps, BallKind::state_fidelity_ball};
  const int ambient = schmidt_ambient_dim(rho_ab.dims());

  if (is_pure(rho_ab, opts.rank_tol)) {
    const PureState phi = top_eigenvector(rho_ab);
    const SchmidtDecomposition s = schmidt(phi);
    const std::vector<double> lambda = schmidt_spectrum(phi);
    const SpectrumSmoothing sm = smooth_min_entropy_spectrum(lambda, eps, ambient);
    const Vector w = schmidt_compose(s, sm.q);
    return {EntropyValue::of(sm.value), SmoothedKind::exact, budget, Matrix(w * w.adjoint())};
  }

  // Mixed: best I_0 over a fixed, eps-independent candidate family filtered
  // by ball membership, so the bound is monotone in eps.
  const double target = budget.threshold() - kMembershipTol;
  const HermitianEigenSystem es = eigh(rho_ab.matrix());
  const std::vector<double> p = to_vector(es.values.cwiseMax(0.0));
  const int rank = numerical_rank(rho_ab, opts.rank_tol);

  SmoothedValue best{zero_coherent_information(rho_ab, opts.rank_tol), SmoothedKind::lower_bound,
                     budget, rho_ab.matrix()};
  const auto offer = [&](const Matrix& candidate, double fid_sq) {
    if (fid_sq < target) return;
    const DensityMatrix c(rho_ab.dims(), candidate, false, 1e-6);
    const EntropyValue v = zero_coherent_information(c, opts.rank_tol);
    if (v.value > best.value.value) {
      best.value = v;
      best.witness = candidate;
    }
  };
  const auto offer_pure = [&](const Vector& raw) {
    const Vector chi = raw / raw.norm();
    const double fid_sq = (chi.adjoint() * rho_ab.matrix() * chi)(0, 0).real();
    if (fid_sq < target) return;
    const PureState st(rho_ab.dims(), chi);
    const double v = min_entropy(schmidt_spectrum(st));
    if (v > best.value.value) {
      best.value = EntropyValue::of(v);
      best.witness = Matrix(st.amplitudes() * st.amplitudes().adjoint());
    }
  };

  double kept = 0.0;
  for (int k = 1; k < rank; ++k) {
    kept += p[k - 1];
    std::vector<double> q(p.begin(), p.begin() + k);
    for (double& x : q) x /= kept;
    offer(spectral_state(es.vectors, q), kept);
  }

  const PureState top = PureState::normalized(rho_ab.dims(), es.vectors.col(0));
  const SchmidtDecomposition s = schmidt(top);
  const std::vector<double> lambda = schmidt_spectrum(top);
  const double lmax = lambda.front();
  const int grid = 32;
  for (int j = 0; j <= grid; ++j) {
    const double cap = 1.0 / ambient + (lmax - 1.0 / ambient) * j / grid;
    offer_pure(schmidt_compose(s, min_infidelity_for_cap(lambda, cap, ambient).q));
  }
  Rng rng(opts.seed);
  for (double delta : {0.05, 0.1, 0.2, 0.4}) {
    for (int t = 0; t < 16; ++t) {
      Vector g(top.dim());
      for (Eigen::Index i = 0; i < g.size(); ++i) g[i] = rng.complex_normal();
      offer_pure(top.amplitudes() + delta * g / g.norm());
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Zero-coherent information, operator-smoothed.

EntropyValue operator_objective(const Matrix& p, const DensityMatrix& rho_ab, double rank_tol) {
  const Matrix sp = psd_sqrt(p);
  return conditional_zero_entropy(sp * support_projector(rho_ab, rank_tol) * sp, rho_ab.dims());
}

double pure_op_smoothed_upper(std::span<const double> schmidt_sq, int ambient, double eps) {
  check_eps(eps);
  if (eps >= 1.0) return std::numeric_limits<double>::infinity();
  const double radius = std::min(1.0, 2.0 * std::sqrt(eps));
  return smooth_min_entropy_spectrum(schmidt_sq, radius, ambient).value - std::log2(1.0 - eps);
}

namespace {

struct WeightCandidate {
  double cost = 0.0;   // sum_k (1 - w_k) p_k
  double value = 0.0;  // objective in bits
  std::vector<double> w;
};

class EigenWeightObjective {
 public:
  EigenWeightObjective(const DensityMatrix& rho, const HermitianEigenSystem& es, int rank)
      : dims_(rho.dims()), vectors_(es.vectors.leftCols(rank)) {}

  double operator()(const std::vector<double>& w) const {
    RealVector wv(static_cast<Eigen::Index>(w.size()));
    for (std::size_t k = 0; k < w.size(); ++k) wv[k] = w[k];
    const Matrix x = vectors_ * wv.asDiagonal() * vectors_.adjoint();
    return conditional_zero_entropy(x, dims_).value;
  }

  Matrix operator_for(const std::vector<double>& w) const {
    RealVector wv(static_cast<Eigen::Index>(w.size()));
    for (std::size_t k = 0; k < w.size(); ++k) wv[k] = w[k];
    return vectors_ * wv.asDiagonal() * vectors_.adjoint();
  }

 private:
  Dims dims_;
  Matrix vectors_;
};

// One restart of the budget-continuation search: walks the geometric budget
// grid, spending budget on weight reductions that raise the objective, and
// records the weights reached at each level.
std::vector<WeightCandidate> continuation_search(const EigenWeightObjective& f,
                                                 const std::vector<double>& p, int levels,
                                                 std::uint64_t seed, bool greedy) {
  const auto r = p.size();
  std::vector<double> w(r, 1.0);
  double cost = 0.0;
  double value = f(w);
  Rng rng(seed);
  std::vector<WeightCandidate> out;
  static constexpr double kFractions[] = {1.0, 0.5, 0.25, 0.1};

  for (int level = 1; level <= levels; ++level) {
    const double budget = std::pow(10.0, -4.0 + 4.0 * level / levels);
    for (std::size_t iter = 0; iter < 4 * r + 4; ++iter) {
      const double room = budget - cost;
      if (room <= 0.0) break;
      double best_value = value;
      std::size_t best_k = r;
      double best_step = 0.0;
      const auto try_move = [&](std::size_t k, double frac) {
        if (p[k] <= 0.0 || w[k] <= 0.0) return;
        const double step = std::min(w[k], room / p[k]) * frac;
        if (step <= 0.0) return;
        w[k] -= step;
        const double v = f(w);
        w[k] += step;
        if (v > best_value + 1e-13) {
          best_value = v;
          best_k = k;
          best_step = step;
        }
      };
      if (greedy) {
        for (std::size_t k = 0; k < r; ++k)
          for (double frac : kFractions) try_move(k, frac);
      } else {
        for (int trial = 0; trial < 6; ++trial)
          try_move(static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(r) - 1)),
                   kFractions[rng.uniform_int(0, 3)] * (0.5 + 0.5 * rng.uniform()));
      }
      if (best_k == r) break;
      w[best_k] -= best_step;
      cost += best_step * p[best_k];
      value = best_value;
    }
    out.push_back({cost, value, w});
  }
  return out;
}

}  // namespace

OperatorSmoothedBounds op_smoothed_I0(const DensityMatrix& rho_ab, double eps,
                                      const SearchOptions& opts) {
  check_eps(eps);
  require(rho_ab.subsystem_count() == 2, ErrorCode::dimension_mismatch,
          "op_smoothed_I0 needs a bipartite state");
  const SmoothingBudget budget{eps, BallKind::operator_ball};
  const int d = rho_ab.dim();
  const EntropyValue i0 = zero_coherent_information(rho_ab, opts.rank_tol);

  OperatorSmoothedBounds out{{i0, SmoothedKind::lower_bound, budget, Matrix::Identity(d, d)},
                             std::nullopt};
  if (eps == 0.0) {
    // Tr[P rho] = 1 forces P to act as the identity on supp(rho).
    out.lower.kind = SmoothedKind::exact;
    out.upper = out.lower;
    return out;
  }

  if (is_pure(rho_ab, opts.rank_tol)) {
    const PureState phi = top_eigenvector(rho_ab);
    const SchmidtDecomposition s = schmidt(phi);
    const std::vector<double> lambda = schmidt_spectrum(phi);
    const double c = water_level(lambda, 1.0 - eps);
    Matrix p = Matrix::Zero(d, d);
    for (std::size_t k = 0; k < lambda.size(); ++k) {
      if (lambda[k] <= 0.0) continue;
      const double wk = std::min(1.0, c / lambda[k]);
      const Vector e = kron(Vector(s.left.col(k)), Vector(s.right.col(k)));
      p += wk * e * e.adjoint();
    }
    const EntropyValue v = c > 0.0 ? EntropyValue::of(-std::log2(c)) : EntropyValue::infinite();
    if (v.value > out.lower.value.value) {
      out.lower.value = v;
      out.lower.witness = p;
    }
    out.upper = SmoothedValue{
        EntropyValue::of(pure_op_smoothed_upper(lambda, schmidt_ambient_dim(rho_ab.dims()), eps)),
        SmoothedKind::upper_bound, budget, std::nullopt};
    return out;
  }

  const HermitianEigenSystem es = eigh(rho_ab.matrix());
  const int rank = numerical_rank(rho_ab, opts.rank_tol);
  std::vector<double> p(rank);
  for (int k = 0; k < rank; ++k) p[k] = std::max(es.values[k], 0.0);
  const EigenWeightObjective f(rho_ab, es, rank);

  std::vector<WeightCandidate> candidates;
  double kept = 0.0;
  for (int k = 1; k < rank; ++k) {
    kept += p[k - 1];
    std::vector<double> w(rank, 0.0);
    std::fill(w.begin(), w.begin() + k, 1.0);
    candidates.push_back({1.0 - kept, f(w), w});
  }

  const int restarts = std::max(1, opts.restarts);
  std::vector<std::vector<WeightCandidate>> runs(restarts);
  for_each_index(opts.exec, restarts, [&](std::int64_t i) {
    runs[i] = continuation_search(f, p, opts.levels, derive_seed(opts.seed, i), i == 0);
  });
  for (auto& run : runs)
    for (auto& c : run) candidates.push_back(std::move(c));

  for (const WeightCandidate& c : candidates) {
    if (c.cost > eps + kMembershipTol) continue;
    if (c.value > out.lower.value.value) {
      out.lower.value = EntropyValue::of(c.value);
      out.lower.witness = f.operator_for(c.w);
    }
  }
  return out;
}

}  // namespace oneshot
