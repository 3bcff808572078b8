#include "oneshot/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "oneshot/error.hpp"

namespace oneshot {
namespace {

constexpr double kPhaseTol = 1e-12;

// Multiplies v by a phase so that its first significant component is real
// positive; returns the phase that was removed.
Complex canonicalize_phase(Eigen::Ref<Vector> v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > kPhaseTol) {
      const Complex phase = v[i] / std::abs(v[i]);
      v /= phase;
      return phase;
    }
  }
  return Complex(1.0, 0.0);
}

Eigen::Index first_significant(const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v[i]) > kPhaseTol) return i;
  return v.size();
}

void check_dims(const Dims& dims) {
  require(!dims.empty(), ErrorCode::dimension_mismatch, "dims must be non-empty");
  for (int d : dims)
    require(d > 0, ErrorCode::dimension_mismatch, "subsystem dimensions must be positive");
}

// Linear offsets (row-major, first subsystem most significant) of every
// multi-index restricted to the subsystems in `which`.
std::vector<Eigen::Index> offsets(const Dims& dims, const std::vector<int>& which) {
  std::vector<Eigen::Index> stride(dims.size());
  Eigen::Index s = 1;
  for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
    stride[k] = s;
    s *= dims[k];
  }
  std::vector<Eigen::Index> out{0};
  for (int sub : which) {
    std::vector<Eigen::Index> next;
    next.reserve(out.size() * dims[sub]);
    for (Eigen::Index base : out)
      for (int digit = 0; digit < dims[sub]; ++digit) next.push_back(base + digit * stride[sub]);
    out = std::move(next);
  }
  return out;
}

}  // namespace

int total_dimension(const Dims& dims) {
  check_dims(dims);
  return std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<>());
}

HermitianEigenSystem eigh(const Matrix& h) {
  require(h.rows() == h.cols(), ErrorCode::dimension_mismatch, "eigh: matrix must be square");
  const Matrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  require(solver.info() == Eigen::Success, ErrorCode::invalid_argument,
          "eigh: eigendecomposition did not converge");
  const Eigen::Index n = sym.rows();
  HermitianEigenSystem out{RealVector(n), Matrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values[k] = solver.eigenvalues()[n - 1 - k];
    out.vectors.col(k) = solver.eigenvectors().col(n - 1 - k);
    canonicalize_phase(out.vectors.col(k));
  }
  return out;
}

Matrix psd_sqrt(const Matrix& h) {
  return hermitian_function(h, [](double x) { return std::sqrt(std::max(x, 0.0)); });
}

double trace_norm(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues().sum();
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a[i] * b;
  return out;
}

// ---------------------------------------------------------------------------

DensityMatrix::DensityMatrix(Dims dims, const Matrix& entries, bool subnormalized, double tol)
    : dims_(std::move(dims)), subnormalized_(subnormalized), tol_(tol) {
  const int d = total_dimension(dims_);
  require(entries.rows() == d && entries.cols() == d, ErrorCode::dimension_mismatch,
          "density matrix size does not match product of dims");
  const double asym = (entries - entries.adjoint()).cwiseAbs().maxCoeff();
  if (asym > tol) {
    std::ostringstream msg;
    msg << "hermiticity violated by " << asym << " (tolerance " << tol << ")";
    fail(ErrorCode::invalid_state, msg.str());
  }
  entries_ = 0.5 * (entries + entries.adjoint());
  const double min_eig = eigh(entries_).values.minCoeff();
  if (min_eig < -tol) {
    std::ostringstream msg;
    msg << "positivity violated: minimum eigenvalue " << min_eig << " (tolerance " << tol << ")";
    fail(ErrorCode::invalid_state, msg.str());
  }
  const double tr = trace();
  if (subnormalized_) {
    if (!(tr > 0.0 && tr <= 1.0 + tol)) {
      std::ostringstream msg;
      msg << "trace " << tr << " outside (0, 1+tol] for a subnormalized state";
      fail(ErrorCode::invalid_state, msg.str());
    }
  } else if (std::abs(tr - 1.0) > tol) {
    std::ostringstream msg;
    msg << "trace invariant violated: trace " << tr << " differs from 1 by " << std::abs(tr - 1.0)
        << " (tolerance " << tol << "); mark the state subnormalized if intended";
    fail(ErrorCode::invalid_state, msg.str());
  }
}

DensityMatrix DensityMatrix::maximally_mixed(Dims dims) {
  const int d = total_dimension(dims);
  return DensityMatrix(std::move(dims), Matrix::Identity(d, d) / static_cast<double>(d));
}

DensityMatrix DensityMatrix::diagonal(Dims dims, std::span<const double> diag) {
  const int d = total_dimension(dims);
  require(static_cast<int>(diag.size()) == d, ErrorCode::dimension_mismatch,
          "diagonal length does not match dims");
  Matrix m = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) m(i, i) = diag[i];
  return DensityMatrix(std::move(dims), m);
}

RealVector DensityMatrix::spectrum() const { return eigh(entries_).values; }

PureState::PureState(Dims dims, Vector amplitudes, double tol)
    : dims_(std::move(dims)), amplitudes_(std::move(amplitudes)) {
  const int d = total_dimension(dims_);
  require(amplitudes_.size() == d, ErrorCode::dimension_mismatch,
          "amplitude count does not match product of dims");
  norm_ = amplitudes_.norm();
  require(norm_ > 0.0, ErrorCode::invalid_state, "pure state has zero norm");
  if (norm_ > 1.0 + tol) {
    std::ostringstream msg;
    msg << "norm invariant violated: norm " << norm_ << " exceeds 1 by " << norm_ - 1.0;
    fail(ErrorCode::invalid_state, msg.str());
  }
}

PureState PureState::normalized(Dims dims, Vector amplitudes) {
  const double n = amplitudes.norm();
  require(n > 0.0, ErrorCode::invalid_state, "cannot normalize a zero vector");
  return PureState(std::move(dims), amplitudes / n);
}

DensityMatrix PureState::density() const {
  return DensityMatrix(dims_, projector(), !is_normalized());
}

PureState maximally_entangled(int rank, int local_dim) {
  require(rank >= 1 && rank <= local_dim, ErrorCode::invalid_argument,
          "maximally entangled state needs 1 <= rank <= local dimension");
  Vector v = Vector::Zero(static_cast<Eigen::Index>(local_dim) * local_dim);
  for (int i = 0; i < rank; ++i) v[i * local_dim + i] = 1.0 / std::sqrt(static_cast<double>(rank));
  return PureState({local_dim, local_dim}, v);
}

PureState maximally_entangled(int rank) { return maximally_entangled(rank, rank); }

PureState product_state(const Vector& a, const Vector& b) {
  return PureState::normalized({static_cast<int>(a.size()), static_cast<int>(b.size())},
                               kron(a, b));
}

Matrix partial_trace(const Matrix& op, const Dims& dims, std::vector<int> keep) {
  const int d = total_dimension(dims);
  require(op.rows() == d && op.cols() == d, ErrorCode::dimension_mismatch,
          "partial_trace: operator size does not match dims");
  std::sort(keep.begin(), keep.end());
  require(std::adjacent_find(keep.begin(), keep.end()) == keep.end(),
          ErrorCode::invalid_argument, "partial_trace: repeated subsystem index");
  std::vector<int> traced;
  for (int k = 0; k < static_cast<int>(dims.size()); ++k) {
    if (!std::binary_search(keep.begin(), keep.end(), k)) traced.push_back(k);
  }
  for (int k : keep)
    require(k >= 0 && k < static_cast<int>(dims.size()), ErrorCode::dimension_mismatch,
            "partial_trace: subsystem index out of range");

  const auto kept = offsets(dims, keep);
  const auto summed = offsets(dims, traced);
  const auto n = static_cast<Eigen::Index>(kept.size());
  Matrix out = Matrix::Zero(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) {
      Complex acc = 0.0;
      for (Eigen::Index t : summed) acc += op(kept[a] + t, kept[b] + t);
      out(a, b) = acc;
    }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::vector<int> keep) {
  require(rho.subsystem_count() >= 2, ErrorCode::dimension_mismatch,
          "partial_trace needs at least two subsystems");
  std::sort(keep.begin(), keep.end());
  Dims reduced;
  for (int k : keep) {
    require(k >= 0 && k < rho.subsystem_count(), ErrorCode::dimension_mismatch,
            "partial_trace: subsystem index out of range");
    reduced.push_back(rho.dims()[k]);
  }
  Matrix out = partial_trace(rho.matrix(), rho.dims(), keep);
  return DensityMatrix(std::move(reduced), out, rho.subnormalized(), rho.tolerance());
}

DensityMatrix partial_trace(const DensityMatrix& rho, int keep) {
  return partial_trace(rho, std::vector<int>{keep});
}

SchmidtDecomposition schmidt(const PureState& phi) {
  require(phi.dims().size() == 2, ErrorCode::dimension_mismatch,
          "schmidt needs a bipartite state");
  const int da = phi.dims()[0];
  const int db = phi.dims()[1];
  Matrix coeff(da, db);
  for (int a = 0; a < da; ++a)
    for (int b = 0; b < db; ++b) coeff(a, b) = phi.amplitudes()[a * db + b];

  Eigen::JacobiSVD<Matrix> svd(coeff, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::Index r = svd.singularValues().size();
  SchmidtDecomposition out{svd.singularValues(), svd.matrixU(), svd.matrixV().conjugate()};
  for (Eigen::Index k = 0; k < r; ++k) {
    const Complex phase = canonicalize_phase(out.left.col(k));
    out.right.col(k) *= phase;
  }

  // Deterministic order inside groups of equal coefficients.
  std::vector<Eigen::Index> order(r);
  std::iota(order.begin(), order.end(), 0);
  for (Eigen::Index start = 0; start < r;) {
    Eigen::Index stop = start + 1;
    while (stop < r && std::abs(out.coefficients[stop] - out.coefficients[start]) < kPhaseTol)
      ++stop;
    std::stable_sort(order.begin() + start, order.begin() + stop,
                     [&](Eigen::Index x, Eigen::Index y) {
                       const auto fx = first_significant(out.left.col(x));
                       const auto fy = first_significant(out.left.col(y));
                       if (fx != fy) return fx < fy;
                       if (fx == out.left.rows()) return false;
                       return out.left(fx, x).real() > out.left(fx, y).real();
                     });
    start = stop;
  }
  SchmidtDecomposition sorted{RealVector(r), Matrix(da, r), Matrix(db, r)};
  for (Eigen::Index k = 0; k < r; ++k) {
    sorted.coefficients[k] = out.coefficients[order[k]];
    sorted.left.col(k) = out.left.col(order[k]);
    sorted.right.col(k) = out.right.col(order[k]);
  }
  return sorted;
}

Vector schmidt_compose(const SchmidtDecomposition& s, std::span<const double> q) {
  require(static_cast<Eigen::Index>(q.size()) <= s.left.cols(), ErrorCode::dimension_mismatch,
          "more weights than Schmidt vectors");
  Vector v = Vector::Zero(s.left.rows() * s.right.rows());
  for (std::size_t k = 0; k < q.size(); ++k) {
    if (q[k] <= 0.0) continue;
    v += std::sqrt(q[k]) * kron(Vector(s.left.col(k)), Vector(s.right.col(k)));
  }
  return v;
}

std::vector<double> schmidt_spectrum(const PureState& phi) {
  const SchmidtDecomposition s = schmidt(phi);
  std::vector<double> out(schmidt_ambient_dim(phi.dims()), 0.0);
  for (Eigen::Index k = 0; k < s.coefficients.size(); ++k)
    out[k] = s.coefficients[k] * s.coefficients[k];
  return out;
}

int schmidt_ambient_dim(const Dims& dims) {
  require(dims.size() == 2, ErrorCode::dimension_mismatch, "expected a bipartite system");
  return std::min(dims[0], dims[1]);
}

Matrix support_projector(const Matrix& op, double rank_tol) {
  const HermitianEigenSystem es = eigh(op);
  const Eigen::Index n = op.rows();
  Matrix proj = Matrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k)
    if (es.values[k] > rank_tol) proj += es.vectors.col(k) * es.vectors.col(k).adjoint();
  return proj;
}

Matrix support_projector(const DensityMatrix& rho, double rank_tol) {
  return support_projector(rho.matrix(), rank_tol);
}

int numerical_rank(const DensityMatrix& rho, double rank_tol) {
  const RealVector ev = rho.spectrum();
  return static_cast<int>((ev.array() > rank_tol).count());
}

PureState purify(const DensityMatrix& rho, double rank_tol) {
  require(!rho.subnormalized() && std::abs(rho.trace() - 1.0) <= rho.tolerance(),
          ErrorCode::invalid_state, "purify: subnormalized input rejected");
  const HermitianEigenSystem es = eigh(rho.matrix());
  int rank = 0;
  while (rank < es.values.size() && es.values[rank] > rank_tol) ++rank;
  require(rank > 0, ErrorCode::invalid_state, "purify: state has numerical rank 0");
  const int d = rho.dim();
  Vector psi = Vector::Zero(static_cast<Eigen::Index>(d) * rank);
  for (int k = 0; k < rank; ++k) {
    const double w = std::sqrt(es.values[k]);
    for (int i = 0; i < d; ++i) psi[i * rank + k] = w * es.vectors(i, k);
  }
  Dims dims = rho.dims();
  dims.push_back(rank);
  return PureState::normalized(std::move(dims), psi);
}

int distill_rank_from_spectrum(std::span<const double> lambda) {
  require(!lambda.empty(), ErrorCode::invalid_argument, "distill_rank_from_spectrum: empty spectrum");
  double sum = 0.0;
  double top = 0.0;
  for (double x : lambda) {
    require(x >= -1e-12, ErrorCode::invalid_argument, "spectrum entries must be nonnegative");
    sum += x;
    top = std::max(top, x);
  }
  require(std::abs(sum - 1.0) <= 1e-8, ErrorCode::invalid_argument,
          "spectrum must sum to 1");
  // Relative slack absorbs rounding in computed spectra such as 1/3.
  return static_cast<int>(std::floor((1.0 / top) * (1.0 + 1e-9)));
}

bool is_majorized_by(std::span<const double> x, std::span<const double> y, double tol) {
  std::vector<double> xs(x.begin(), x.end());
  std::vector<double> ys(y.begin(), y.end());
  const std::size_t n = std::max(xs.size(), ys.size());
  xs.resize(n, 0.0);
  ys.resize(n, 0.0);
  std::sort(xs.rbegin(), xs.rend());
  std::sort(ys.rbegin(), ys.rend());
  double sx = 0.0;
  double sy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sx += xs[k];
    sy += ys[k];
    if (sx > sy + tol) return false;
  }
  return std::abs(sx - sy) <= tol * static_cast<double>(n);
}

PureState bipartite_tensor(const PureState& a, const PureState& b) {
  require(a.dims().size() == 2 && b.dims().size() == 2, ErrorCode::dimension_mismatch,
          "bipartite_tensor needs bipartite factors");
  const int a1 = a.dims()[0], b1 = a.dims()[1];
  const int a2 = b.dims()[0], b2 = b.dims()[1];
  Vector out(static_cast<Eigen::Index>(a1) * a2 * b1 * b2);
  for (int i1 = 0; i1 < a1; ++i1)
    for (int i2 = 0; i2 < a2; ++i2)
      for (int j1 = 0; j1 < b1; ++j1)
        for (int j2 = 0; j2 < b2; ++j2)
          out[((i1 * a2 + i2) * b1 + j1) * b2 + j2] =
              a.amplitudes()[i1 * b1 + j1] * b.amplitudes()[i2 * b2 + j2];
  return PureState({a1 * a2, b1 * b2}, out);
}

}  // namespace oneshot
