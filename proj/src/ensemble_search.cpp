#include <algorithm>
#include <cmath>
#include <numbers>

#include "oneshot/distillation.hpp"
#include "oneshot/error.hpp"
#include "oneshot/metrics.hpp"
#include "oneshot/random.hpp"

namespace oneshot {
namespace {

constexpr double kMinWeight = 1e-14;
constexpr int kBatch = 8;

Matrix unitary_exp(const Matrix& generator, double theta) {
  const HermitianEigenSystem es = eigh(generator);
  Vector phases(es.values.size());
  for (Eigen::Index k = 0; k < phases.size(); ++k)
    phases[k] = std::polar(1.0, theta * es.values[k]);
  return es.vectors * phases.asDiagonal() * es.vectors.adjoint();
}

Matrix fourier(int m) {
  Matrix f(m, m);
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k)
      f(j, k) = std::polar(1.0 / std::sqrt(static_cast<double>(m)),
                           2.0 * std::numbers::pi * j * k / m);
  return f;
}

// Columns: the d^2 generalized Bell states (X^a Z^b (x) 1)|Psi^d>.
Matrix generalized_bell_basis(int d) {
  const int n = d * d;
  Matrix b = Matrix::Zero(n, n);
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (int a = 0; a < d; ++a)
    for (int z = 0; z < d; ++z)
      for (int i = 0; i < d; ++i)
        b(((i + a) % d) * d + i, a * d + z) = std::polar(amp, 2.0 * std::numbers::pi * z * i / d);
  return b;
}

struct Candidate {
  double value = -std::numeric_limits<double>::infinity();
  Matrix isometry;
};

}  // namespace

PureEnsemble ensemble_from_isometry(const DensityMatrix& rho, const Matrix& isometry, double rank_tol) {
  const HermitianEigenSystem es = eigh(rho.matrix());
  const int rank = numerical_rank(rho, rank_tol);
  require(isometry.cols() == rank, ErrorCode::dimension_mismatch,
          "isometry must have one column per eigenvector in the support");
  Matrix scaled = es.vectors.leftCols(rank);
  for (int k = 0; k < rank; ++k) scaled.col(k) *= std::sqrt(std::max(es.values[k], 0.0));

  std::vector<std::pair<double, Vector>> kept;
  double total = 0.0;
  for (Eigen::Index i = 0; i < isometry.rows(); ++i) {
    const Vector psi = scaled * isometry.row(i).transpose();
    const double w = psi.squaredNorm();
    if (w < kMinWeight) continue;
    kept.emplace_back(w, psi / std::sqrt(w));
    total += w;
  }
  std::vector<EnsembleMember> members;
  for (auto& [w, psi] : kept) members.push_back({w / total, PureState::normalized(rho.dims(), psi)});
  return PureEnsemble(std::move(members));
}

DecompositionResult search_decompositions(const DensityMatrix& rho,
                                          const std::function<double(const PureEnsemble&)>& objective,
                                          double ceiling, const DecompositionOptions& opts) {
  require(opts.restarts > 0, ErrorCode::invalid_argument, "search budget must be positive");
  require(rho.subsystem_count() == 2, ErrorCode::dimension_mismatch, "decomposition search needs a bipartite state");
  const int rank = numerical_rank(rho);
  const auto evaluate = [&](const Matrix& w) { return objective(ensemble_from_isometry(rho, w)); };
  const auto done = [&](double v) { return v >= ceiling - 1e-12; };

  std::vector<Matrix> seeds;
  seeds.push_back(Matrix::Identity(rank, rank));
  seeds.push_back(fourier(rank));
  seeds.push_back(fourier(2 * rank).leftCols(rank));
  if (rho.dims()[0] == rho.dims()[1]) {
    // Each member is proportional to sqrt(rho) applied to a maximally entangled basis vector.
    const HermitianEigenSystem es = eigh(rho.matrix());
    seeds.push_back(generalized_bell_basis(rho.dims()[0]).adjoint() * es.vectors.leftCols(rank));
  }

  Candidate best;
  for (const Matrix& w : seeds) {
    const double v = evaluate(w);
    if (v > best.value) best = {v, w};
  }
  int used = 1;

  const auto local_search = [&](std::int64_t restart) {
    Rng rng(derive_seed(opts.seed, static_cast<std::uint64_t>(restart)));
    const int m = rank + static_cast<int>(restart % (rank + 1));
    Matrix u = random_unitary(m, rng);
    Candidate c{evaluate(u.leftCols(rank)), u.leftCols(rank)};
    double theta = 0.5;
    for (int evals = 1; evals < opts.max_evaluations && theta >= 1e-9 && !done(c.value);) {
      const Matrix g = random_hermitian(m, rng);
      bool moved = false;
      for (double sign : {1.0, -1.0}) {
        const Matrix next = unitary_exp(g, sign * theta) * u;
        const double v = evaluate(next.leftCols(rank));
        ++evals;
        if (v > c.value + 1e-14) {
          u = next;
          c = {v, next.leftCols(rank)};
          moved = true;
          break;
        }
      }
      if (!moved) theta *= 0.5;
    }
    return c;
  };

  for (int start = 1; start < opts.restarts && !done(best.value); start += kBatch) {
    const int count = std::min(kBatch, opts.restarts - start);
    std::vector<Candidate> batch(count);
    for_each_index(opts.exec, count, [&](std::int64_t i) { batch[i] = local_search(start + i); });
    for (Candidate& c : batch)
      if (c.value > best.value) best = std::move(c);
    used = start + count;
  }
  return {best.value, ensemble_from_isometry(rho, best.isometry), used};
}

BoundReport eoa_one_shot(const DensityMatrix& rho_ab, double eps, const DecompositionOptions& opts) {
  require(eps >= 0.0 && eps <= 1.0, ErrorCode::invalid_argument, "eps must lie in [0, 1]");
  require(!rho_ab.subnormalized(), ErrorCode::invalid_state, "eoa_one_shot needs a normalized state");
  const double reference = std::min(von_neumann_entropy(partial_trace(rho_ab, 0)).value,
                                    von_neumann_entropy(partial_trace(rho_ab, 1)).value);
  const double stop = eps == 0.0 ? reference : std::log2(static_cast<double>(schmidt_ambient_dim(rho_ab.dims())));

  const auto objective = [eps](const PureEnsemble& e) { return ed_ensemble_lower(e, eps).unfloored; };
  DecompositionResult found = search_decompositions(rho_ab, objective, stop, opts);

  EnsembleLowerResult best = ed_ensemble_lower(found.ensemble, eps);
  const int rank = numerical_rank(rho_ab);
  EnsembleLowerResult seed = ed_ensemble_lower(ensemble_from_isometry(rho_ab, Matrix::Identity(rank, rank)), eps);
  if (seed.value > best.value) best = std::move(seed);

  BoundReport r;
  r.lower = best.value;
  r.upper = reference;
  r.upper_rigorous = false;
  r.eps = eps;
  r.eps_derived = {{"eps_prime", eps / 2.0}};
  r.method = "ensemble decomposition search (" + std::to_string(found.restarts_used) + " restarts)";
  r.warnings.push_back("upper is the reference ceiling min(S(rho_A), S(rho_B)), not a one-shot bound");
  r.lower_witness = std::move(best.witness);
  return r;
}

}  // namespace oneshot
