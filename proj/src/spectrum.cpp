#include "oneshot/spectrum.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <limits>
#include <string>

#include "oneshot/error.hpp"
#include "oneshot/metrics.hpp"

namespace oneshot {
namespace {

constexpr double kCommuteTol = 1e-12;

int checked_power_dim(int d, int n, int cap) {
  require(n >= 1, ErrorCode::invalid_argument, "tensor power n must be at least 1");
  long long total = 1;
  for (int i = 0; i < n; ++i) {
    total *= d;
    if (total > cap)
      fail(ErrorCode::invalid_argument, "dimension cap exceeded: " + std::to_string(d) + "^" +
                                            std::to_string(n) + " > " + std::to_string(cap));
  }
  return static_cast<int>(total);
}

Matrix tensor_power(const Matrix& m, int n) {
  Matrix out = m;
  for (int i = 1; i < n; ++i) out = kron(out, m);
  return out;
}

// Diagonals of rho and sigma in a common eigenbasis, if one exists.
std::optional<std::pair<std::vector<double>, std::vector<double>>> joint_spectra(const Matrix& rho,
                                                                                  const Matrix& sigma) {
  const double scale = 1.0 + rho.norm() + sigma.norm();
  if ((rho * sigma - sigma * rho).norm() > kCommuteTol * scale) return std::nullopt;
  const HermitianEigenSystem es = eigh(rho + std::numbers::sqrt2 * sigma);
  const Matrix r = es.vectors.adjoint() * rho * es.vectors;
  const Matrix s = es.vectors.adjoint() * sigma * es.vectors;
  const auto off = [](const Matrix& m) { return (m - Matrix(m.diagonal().asDiagonal())).norm(); };
  if (off(r) > 1e-10 * scale || off(s) > 1e-10 * scale) return std::nullopt;
  std::vector<double> pr(r.rows());
  std::vector<double> ps(s.rows());
  for (Eigen::Index i = 0; i < r.rows(); ++i) {
    pr[i] = std::max(r(i, i).real(), 0.0);
    ps[i] = std::max(s(i, i).real(), 0.0);
  }
  return std::make_pair(std::move(pr), std::move(ps));
}

// One type class of length-n sequences: log multiplicity and the log
// probabilities of a single sequence under rho and sigma.
struct TypeClass {
  double log_count;
  double log_rho;
  double log_sigma;
};

void enumerate_types(const std::vector<double>& pr, const std::vector<double>& ps, int n,
                     std::vector<TypeClass>& out) {
  const int d = static_cast<int>(pr.size());
  std::vector<int> counts(d, 0);
  const double base = std::lgamma(n + 1.0);
  const auto visit = [&](auto&& self, int index, int remaining) -> void {
    if (index == d - 1) {
      counts[index] = remaining;
      double lc = base;
      double lr = 0.0;
      double ls = 0.0;
      for (int j = 0; j < d; ++j) {
        lc -= std::lgamma(counts[j] + 1.0);
        if (counts[j] == 0) continue;
        lr += pr[j] > 0.0 ? counts[j] * std::log(pr[j]) : -std::numeric_limits<double>::infinity();
        ls += ps[j] > 0.0 ? counts[j] * std::log(ps[j]) : -std::numeric_limits<double>::infinity();
      }
      out.push_back({lc, lr, ls});
      return;
    }
    for (int k = 0; k <= remaining; ++k) {
      counts[index] = k;
      self(self, index + 1, remaining - k);
    }
  };
  visit(visit, 0, n);
}

// Precomputed tensor powers (or type classes) for repeated gamma evaluation.
class PowerPair {
 public:
  PowerPair(const DensityMatrix& rho, const DensityMatrix& sigma, int n, const DiagnosticOptions& opts)
      : n_(n) {
    require(rho.dim() == sigma.dim(), ErrorCode::dimension_mismatch,
            "divergence diagnostic needs rho and sigma of equal dimension");
    checked_power_dim(rho.dim(), n, opts.dimension_cap);
    if (opts.allow_commuting_shortcut) {
      if (auto spectra = joint_spectra(rho.matrix(), sigma.matrix())) {
        enumerate_types(spectra->first, spectra->second, n, types_);
        commuting_ = true;
        return;
      }
    }
    rho_n_ = tensor_power(rho.matrix(), n);
    sigma_n_ = tensor_power(sigma.matrix(), n);
  }

  double operator()(double gamma) const {
    const double log_scale = n_ * gamma * std::numbers::ln2;
    if (commuting_) {
      double total = 0.0;
      for (const TypeClass& t : types_) {
        const double a = std::exp(t.log_rho);
        const double b = std::exp(t.log_sigma + log_scale);
        if (a > b) total += std::exp(t.log_count) * (a - b);
      }
      return total;
    }
    const HermitianEigenSystem es = eigh(rho_n_ - std::exp(log_scale) * sigma_n_);
    double total = 0.0;
    for (Eigen::Index k = 0; k < es.values.size(); ++k) total += std::max(es.values[k], 0.0);
    return total;
  }

 private:
  int n_;
  bool commuting_ = false;
  std::vector<TypeClass> types_;
  Matrix rho_n_;
  Matrix sigma_n_;
};

}  // namespace

DensityMatrix QCState::dense() const {
  require(!members.empty(), ErrorCode::invalid_argument, "qc state has no members");
  const int m = register_dim();
  const Dims& ab = members.front().block.dims();
  const int d = members.front().block.dim();
  Matrix out = Matrix::Zero(d * m, d * m);
  for (int i = 0; i < m; ++i) {
    Matrix z = Matrix::Zero(m, m);
    z(i, i) = 1.0;
    out += members[i].weight * kron(members[i].block.matrix(), z);
  }
  Dims dims = ab;
  dims.push_back(m);
  return DensityMatrix(dims, out);
}

QCState qc_state(const PureEnsemble& ensemble) {
  QCState out;
  for (const EnsembleMember& m : ensemble.members())
    out.members.push_back({m.weight, DensityMatrix(m.state.dims(), m.state.projector(), ensemble.subnormalized())});
  return out;
}

double qc_smoothed_I0(const PureEnsemble& ensemble, double eps) {
  require(eps >= 0.0 && eps <= 1.0, ErrorCode::invalid_argument, "eps must lie in [0, 1]");
  return ensemble_budget_allocation(ensemble, eps).unfloored;
}

int default_dimension_cap() {
  const char* env = std::getenv("ONESHOT_DIM_CAP");
  if (env == nullptr || *env == '\0') return 4096;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  require(end != env && *end == '\0' && v > 0 && v <= std::numeric_limits<int>::max(),
          ErrorCode::parse_error, std::string("ONESHOT_DIM_CAP is not a positive integer: ") + env);
  return static_cast<int>(v);
}

double divergence_diagnostic(const DensityMatrix& rho, const DensityMatrix& sigma, int n, double gamma,
                             const DiagnosticOptions& opts) {
  return PowerPair(rho, sigma, n, opts)(gamma);
}

double divergence_diagnostic_dense(const DensityMatrix& rho, const DensityMatrix& sigma, int n,
                                   double gamma, int dimension_cap) {
  DiagnosticOptions opts;
  opts.dimension_cap = dimension_cap;
  opts.allow_commuting_shortcut = false;
  return PowerPair(rho, sigma, n, opts)(gamma);
}

std::vector<double> GammaGrid::points() const {
  require(step > 0.0, ErrorCode::invalid_argument, "gamma grid step must be positive");
  std::vector<double> out;
  for (long k = 0;; ++k) {
    const double g = start + static_cast<double>(k) * step;
    if (g > stop + 1e-12) break;
    out.push_back(g);
  }
  return out;
}

SpectrumEstimate inf_divergence_rate_estimate(const DensityMatrix& rho, const DensityMatrix& sigma,
                                              int n_max, double tol, const GammaGrid& grid,
                                              const DiagnosticOptions& opts) {
  require(n_max >= 1, ErrorCode::invalid_argument, "n_max must be at least 1");
  require(tol > 0.0 && tol < 1.0, ErrorCode::invalid_argument, "tol must lie in (0, 1)");
  SpectrumEstimate out;
  out.tol = tol;
  out.gammas = grid.points();
  require(!out.gammas.empty(), ErrorCode::invalid_argument, "gamma grid is empty");

  for (int n = 1; n <= n_max; ++n) {
    const PowerPair pair(rho, sigma, n, opts);
    std::vector<double> curve(out.gammas.size());
    for_each_index(opts.exec, static_cast<std::int64_t>(curve.size()),
                   [&](std::int64_t k) { curve[k] = pair(out.gammas[k]); });
    std::optional<double> rate;
    for (std::size_t k = 0; k < curve.size(); ++k)
      if (curve[k] >= 1.0 - tol) rate = out.gammas[k];
    out.n_values.push_back(n);
    out.curves.push_back(std::move(curve));
    out.rate_estimate.push_back(rate);
  }
  return out;
}

double average_entanglement(const PureEnsemble& ensemble) {
  double total = 0.0;
  for (const EnsembleMember& m : ensemble.members()) {
    const std::vector<double> lambda = schmidt_spectrum(m.state);
    total += m.weight * shannon_entropy(lambda);
  }
  return total;
}

double asymptotic_reference(const DensityMatrix& rho_ab) {
  require(rho_ab.subsystem_count() == 2, ErrorCode::dimension_mismatch, "asymptotic_reference needs a bipartite state");
  return std::min(von_neumann_entropy(partial_trace(rho_ab, 0)).value,
                  von_neumann_entropy(partial_trace(rho_ab, 1)).value);
}

EntropicEoa entropic_eoa(const DensityMatrix& rho_ab, const DecompositionOptions& opts) {
  require(!rho_ab.subnormalized(), ErrorCode::invalid_state, "entropic_eoa needs a normalized state");
  const int rank = numerical_rank(rho_ab);
  const double seed = average_entanglement(ensemble_from_isometry(rho_ab, Matrix::Identity(rank, rank)));
  DecompositionResult found = search_decompositions(rho_ab, average_entanglement, asymptotic_reference(rho_ab), opts);
  return {found.value, std::move(found.ensemble), seed};
}

}  // namespace oneshot
