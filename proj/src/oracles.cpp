#include "oneshot/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "oneshot/error.hpp"
#include "oneshot/metrics.hpp"
#include "oneshot/random.hpp"

namespace oneshot {
namespace {

constexpr double kFeasibleSlack = 1e-12;

std::vector<double> sorted_descending(std::span<const double> p) {
  std::vector<double> s(p.begin(), p.end());
  std::sort(s.begin(), s.end(), std::greater<>());
  return s;
}

void check_probability(std::span<const double> p) {
  require(!p.empty(), ErrorCode::invalid_argument, "empty probability vector");
  double total = 0.0;
  for (double x : p) {
    require(x >= -1e-12, ErrorCode::invalid_argument, "negative probability");
    total += x;
  }
  require(std::abs(total - 1.0) <= 1e-8, ErrorCode::invalid_argument, "probabilities do not sum to 1");
}

// Is there a nonincreasing q with q[0] = level, sum N, and sum sqrt(p q / N) >= target?
class LevelSearch {
 public:
  LevelSearch(const std::vector<double>& p, int n, double target) : p_(p), n_(n), target_(target) {
    tail_.assign(p.size() + 1, 0.0);
    for (std::size_t i = p.size(); i-- > 0;) tail_[i] = tail_[i + 1] + p[i];
  }

  bool feasible_from(std::size_t index, int remaining, int cap, double partial) const {
    const std::size_t d = p_.size();
    if (partial + std::sqrt(tail_[index] * remaining / static_cast<double>(n_)) < target_) return false;
    if (index == d - 1) {
      if (remaining > cap) return false;
      return partial + std::sqrt(p_[index] * remaining / static_cast<double>(n_)) >= target_;
    }
    // Remaining entries cannot exceed `cap`, so this one needs at least a share.
    const int slots = static_cast<int>(d - index);
    const int lo = (remaining + slots - 1) / slots;
    for (int q = std::min(cap, remaining); q >= lo; --q) {
      if (feasible_from(index + 1, remaining - q, q, partial + std::sqrt(p_[index] * q / static_cast<double>(n_))))
        return true;
    }
    return false;
  }

  bool level_feasible(int level, Execution exec) const {
    const double head = std::sqrt(p_[0] * level / static_cast<double>(n_));
    const int rest = n_ - level;
    if (p_.size() == 1) return rest == 0 && head >= target_;
    const int top = std::min(level, rest);
    const int slots = static_cast<int>(p_.size()) - 1;
    const int lo = (rest + slots - 1) / slots;
    if (top < lo) return false;
    std::vector<char> hit(top - lo + 1, 0);
    for_each_index(exec, static_cast<std::int64_t>(hit.size()), [&](std::int64_t i) {
      const int q1 = top - static_cast<int>(i);
      const double partial = head + std::sqrt(p_[1] * q1 / static_cast<double>(n_));
      hit[i] = p_.size() == 2 ? (rest == q1 && partial >= target_) : feasible_from(2, rest - q1, q1, partial);
    });
    return std::any_of(hit.begin(), hit.end(), [](char c) { return c != 0; });
  }

 private:
  const std::vector<double>& p_;
  int n_;
  double target_;
  std::vector<double> tail_;
};

// Enumerates nonincreasing compositions of n into d parts.
template <typename Visit>
void for_each_composition(int d, int n, Visit&& visit) {
  std::vector<int> q(d, 0);
  const auto rec = [&](auto&& self, int index, int remaining, int cap) -> void {
    if (index == d - 1) {
      if (remaining > cap) return;
      q[index] = remaining;
      visit(q);
      return;
    }
    const int slots = d - index;
    const int lo = (remaining + slots - 1) / slots;
    for (int v = std::min(cap, remaining); v >= lo; --v) {
      q[index] = v;
      self(self, index + 1, remaining - v, v);
    }
  };
  rec(rec, 0, n, n);
}

// Capped-proportional spectrum at `cap`, found by bisection on the scale.
std::vector<double> water_fill(const std::vector<double>& p, double cap) {
  const std::size_t d = p.size();
  std::vector<double> q(d, 0.0);
  std::size_t support = 0;
  for (double x : p) support += x > 0.0;
  if (support * cap <= 1.0) {
    for (std::size_t i = 0; i < d; ++i) q[i] = p[i] > 0.0 ? cap : 0.0;
    const double surplus = 1.0 - support * cap;
    if (support < d)
      for (std::size_t i = 0; i < d; ++i)
        if (p[i] <= 0.0) q[i] = surplus / (d - support);
    return q;
  }
  double lo = 0.0;
  double hi = 1.0 / *std::min_element(p.begin(), p.begin() + support);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    double mass = 0.0;
    for (double x : p) mass += std::min(mid * x, cap);
    (mass < 1.0 ? lo : hi) = mid;
  }
  double mass = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    q[i] = std::min(hi * p[i], cap);
    mass += q[i];
  }
  for (double& x : q) x /= mass;
  return q;
}

Matrix unitary_exp(const Matrix& generator, double theta) {
  const HermitianEigenSystem es = eigh(generator);
  Vector phases(es.values.size());
  for (Eigen::Index k = 0; k < phases.size(); ++k) phases[k] = std::polar(1.0, theta * es.values[k]);
  return es.vectors * phases.asDiagonal() * es.vectors.adjoint();
}

}  // namespace

int OracleConfig::grid_points() const {
  require(grid_resolution > 0.0, ErrorCode::invalid_argument, "grid resolution must be positive");
  return static_cast<int>(std::ceil(1.0 / grid_resolution - 1e-9));
}

void OracleConfig::validate(int dim) const {
  require(grid_resolution > 0.0, ErrorCode::invalid_argument, "grid resolution must be positive");
  require(dimension_cap <= 6, ErrorCode::invalid_argument, "exhaustive oracles support dimension cap <= 6");
  require(dim <= dimension_cap, ErrorCode::invalid_argument,
          "dimension " + std::to_string(dim) + " above oracle cap " + std::to_string(dimension_cap));
}

double oracle_smooth_min_entropy(std::span<const double> p, double eps, const OracleConfig& cfg) {
  check_probability(p);
  require(eps >= 0.0 && eps <= 1.0, ErrorCode::invalid_argument, "eps must lie in [0, 1]");
  const int d = static_cast<int>(p.size());
  cfg.validate(d);
  const std::vector<double> sorted = sorted_descending(p);
  if (eps == 0.0) return -std::log2(sorted.front());

  const int n = cfg.grid_points();
  const LevelSearch search(sorted, n, std::sqrt(1.0 - eps * eps) - kFeasibleSlack);
  for (int level = (n + d - 1) / d; level <= n; ++level)
    if (search.level_feasible(level, cfg.exec)) return -std::log2(static_cast<double>(level) / n);
  return 0.0;
}

PerturbationReport oracle_noncommuting_search(std::span<const double> p, double eps, double solver_cap,
                                              const OracleConfig& cfg) {
  check_probability(p);
  const int d = static_cast<int>(p.size());
  cfg.validate(d);
  const std::vector<double> base(p.begin(), p.end());
  const DensityMatrix rho = DensityMatrix::diagonal({d}, base);
  const double target = 1.0 - eps * eps;

  struct Sample {
    bool member = false;
    double value = 0.0;
  };
  std::vector<Sample> samples(cfg.sample_count);
  for_each_index(cfg.exec, cfg.sample_count, [&](std::int64_t i) {
    Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(i)));
    std::vector<double> q;
    if (i % 2 == 0) {
      const double s = rng.uniform();
      q.resize(d);
      for (int k = 0; k < d; ++k) q[k] = (1.0 - s) * base[k] + s / d;
    } else {
      const double cap = std::max(1.0 / d, solver_cap * (1.0 - 1e-3 * rng.uniform()));
      q = water_fill(base, cap);
    }
    const Matrix u = unitary_exp(random_hermitian(d, rng), 0.3 * rng.uniform());
    RealVector qv(d);
    for (int k = 0; k < d; ++k) qv[k] = q[k];
    const Matrix sigma_m = u * qv.asDiagonal() * u.adjoint();
    const DensityMatrix sigma({d}, sigma_m, false, 1e-6);
    const double f = fidelity(rho, sigma);
    if (f * f >= target) samples[i] = {true, min_entropy(sigma).value};
  });

  PerturbationReport out;
  out.samples = cfg.sample_count;
  for (const Sample& s : samples) {
    if (!s.member) continue;
    ++out.members_found;
    out.best_value = std::max(out.best_value, s.value);
  }
  return out;
}

double oracle_ensemble_allocation(const PureEnsemble& ensemble, double budget, const OracleConfig& cfg,
                                  bool subnormalized) {
  const int ambient = schmidt_ambient_dim(ensemble.dims());
  cfg.validate(ambient);
  require(budget >= 0.0, ErrorCode::invalid_argument, "budget must be nonnegative");
  // A zero budget admits only the members themselves, which a grid cannot hit.
  if (budget == 0.0) return f_min(ensemble);
  const int n = cfg.grid_points();

  struct Point {
    double top;
    double fid;
  };
  std::vector<std::vector<Point>> frontiers(ensemble.size());
  for_each_index(cfg.exec, static_cast<std::int64_t>(ensemble.size()), [&](std::int64_t i) {
    const std::vector<double> lambda = schmidt_spectrum(ensemble.members()[i].state);
    std::vector<Point> pts;
    for_each_composition(ambient, n, [&](const std::vector<int>& q) {
      double f = 0.0;
      for (int k = 0; k < ambient; ++k) f += std::sqrt(lambda[k] * q[k] / static_cast<double>(n));
      const double top = static_cast<double>(q[0]) / n;
      if (subnormalized) {
        for (int c = 1; c <= 100; ++c) pts.push_back({top * c / 100.0, std::sqrt(c / 100.0) * f});
      } else {
        pts.push_back({top, f});
      }
    });
    std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a.top < b.top; });
    for (std::size_t k = 1; k < pts.size(); ++k) pts[k].fid = std::max(pts[k].fid, pts[k - 1].fid);
    frontiers[i] = std::move(pts);
  });

  std::vector<double> caps;
  for (const auto& f : frontiers)
    for (const Point& pt : f) caps.push_back(pt.top);
  std::sort(caps.begin(), caps.end());
  caps.erase(std::unique(caps.begin(), caps.end()), caps.end());

  const auto best_fidelity = [&](std::size_t member, double cap) {
    const auto& f = frontiers[member];
    auto it = std::upper_bound(f.begin(), f.end(), cap + 1e-15, [](double c, const Point& pt) { return c < pt.top; });
    return it == f.begin() ? 0.0 : std::prev(it)->fid;
  };
  std::vector<char> ok(caps.size(), 0);
  for_each_index(cfg.exec, static_cast<std::int64_t>(caps.size()), [&](std::int64_t j) {
    double cost = 0.0;
    for (std::size_t i = 0; i < ensemble.size(); ++i)
      cost += ensemble.members()[i].weight * (1.0 - best_fidelity(i, caps[j]));
    ok[j] = cost <= budget + 1e-10;
  });
  for (std::size_t j = 0; j < caps.size(); ++j)
    if (ok[j] && caps[j] > 0.0) return -std::log2(caps[j]);
  return 0.0;
}

double oracle_ensemble_lower(const PureEnsemble& ensemble, double eps, const OracleConfig& cfg) {
  require(eps >= 0.0 && eps <= 1.0, ErrorCode::invalid_argument, "eps must lie in [0, 1]");
  return oracle_ensemble_allocation(ensemble, eps / 2.0, cfg);
}

}  // namespace oneshot
