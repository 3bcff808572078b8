#pragma once

// Dense complex linear algebra and the two state carriers used everywhere
// else: DensityMatrix (mixed, possibly subnormalized) and PureState.

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <vector>

namespace oneshot {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Dims = std::vector<int>;

inline constexpr double kDefaultRankTol = 1e-10;
inline constexpr double kStateTol = 1e-8;

int total_dimension(const Dims& dims);

/// Eigenpairs of a Hermitian matrix, eigenvalues sorted descending.
struct HermitianEigenSystem {
  RealVector values;
  Matrix vectors;  // column k pairs with values[k]
};

/// Decomposes (H + H^dagger)/2. Degenerate eigenvectors get a canonical phase
/// (first component of magnitude > 1e-12 made real positive).
HermitianEigenSystem eigh(const Matrix& h);

/// f applied to the spectrum of a Hermitian matrix.
template <typename F>
Matrix hermitian_function(const Matrix& h, F&& f) {
  const HermitianEigenSystem es = eigh(h);
  RealVector fv(es.values.size());
  for (Eigen::Index k = 0; k < fv.size(); ++k) fv[k] = f(es.values[k]);
  return es.vectors * fv.asDiagonal() * es.vectors.adjoint();
}

/// Square root of a PSD matrix; eigenvalues below zero are clamped.
Matrix psd_sqrt(const Matrix& h);

/// Sum of singular values.
double trace_norm(const Matrix& m);

Matrix kron(const Matrix& a, const Matrix& b);
Vector kron(const Vector& a, const Vector& b);

class PureState;

class DensityMatrix {
 public:
  /// Validates Hermiticity, positivity and trace (1, or in (0, 1+tol] when
  /// subnormalized). Stores the Hermitian part of entries.
  DensityMatrix(Dims dims, const Matrix& entries, bool subnormalized = false,
                double tol = kStateTol);

  static DensityMatrix maximally_mixed(Dims dims);
  static DensityMatrix diagonal(Dims dims, std::span<const double> diag);

  const Dims& dims() const noexcept { return dims_; }
  const Matrix& matrix() const noexcept { return entries_; }
  int dim() const noexcept { return static_cast<int>(entries_.rows()); }
  int subsystem_count() const noexcept { return static_cast<int>(dims_.size()); }
  bool subnormalized() const noexcept { return subnormalized_; }
  double tolerance() const noexcept { return tol_; }
  double trace() const { return entries_.trace().real(); }

  /// Eigenvalues, descending.
  RealVector spectrum() const;

 private:
  Dims dims_;
  Matrix entries_;
  bool subnormalized_;
  double tol_;
};

class PureState {
 public:
  /// Norm must lie in (0, 1+tol]; a norm below 1 marks a subnormalized vector.
  PureState(Dims dims, Vector amplitudes, double tol = kStateTol);

  /// Rescales amplitudes to unit norm.
  static PureState normalized(Dims dims, Vector amplitudes);

  const Dims& dims() const noexcept { return dims_; }
  const Vector& amplitudes() const noexcept { return amplitudes_; }
  int dim() const noexcept { return static_cast<int>(amplitudes_.size()); }
  double norm() const noexcept { return norm_; }
  bool is_normalized(double tol = kStateTol) const { return std::abs(norm_ - 1.0) <= tol; }

  Matrix projector() const { return amplitudes_ * amplitudes_.adjoint(); }
  DensityMatrix density() const;

 private:
  Dims dims_;
  Vector amplitudes_;
  double norm_;
};

/// Psi^M embedded in C^d (x) C^d: (1/sqrt M) sum_{i<M} |i>|i>.
PureState maximally_entangled(int rank, int local_dim);
PureState maximally_entangled(int rank);

/// |a>|b> with the same bipartite cut as a (x) b flattened row-major.
PureState product_state(const Vector& a, const Vector& b);

/// Reduced operator on the listed subsystems (in increasing order).
Matrix partial_trace(const Matrix& op, const Dims& dims, std::vector<int> keep);
DensityMatrix partial_trace(const DensityMatrix& rho, std::vector<int> keep);
DensityMatrix partial_trace(const DensityMatrix& rho, int keep);

struct SchmidtDecomposition {
  RealVector coefficients;  // descending, squares sum to norm^2
  Matrix left;              // columns: orthonormal vectors on A
  Matrix right;             // columns: orthonormal vectors on B
};

/// Bipartite Schmidt form phi = sum_k c_k |left_k>|right_k>.
SchmidtDecomposition schmidt(const PureState& phi);

/// sum_k sqrt(q_k) |left_k>|right_k>; q may be shorter than the bases.
Vector schmidt_compose(const SchmidtDecomposition& s, std::span<const double> q);

/// Squared Schmidt coefficients padded with zeros to min(d_A, d_B).
std::vector<double> schmidt_spectrum(const PureState& phi);

/// Largest Schmidt rank a bipartite pure state on these dims can have.
int schmidt_ambient_dim(const Dims& dims);

Matrix support_projector(const Matrix& op, double rank_tol = kDefaultRankTol);
Matrix support_projector(const DensityMatrix& rho, double rank_tol = kDefaultRankTol);
int numerical_rank(const DensityMatrix& rho, double rank_tol = kDefaultRankTol);

/// sum_k sqrt(lambda_k) |v_k>|k> with reference dimension equal to the
/// numerical rank. Subnormalized input is rejected.
PureState purify(const DensityMatrix& rho, double rank_tol = kDefaultRankTol);

/// floor(1/max(lambda)): the rank of the largest maximally entangled state a
/// pure state with Schmidt spectrum lambda converts to exactly under LOCC.
int distill_rank_from_spectrum(std::span<const double> lambda);

/// x majorized by y: sorted-descending partial sums of x never exceed y's.
bool is_majorized_by(std::span<const double> x, std::span<const double> y, double tol = 1e-12);

/// Tensor product of bipartite pure states regrouped to (A1 A2)(B1 B2).
PureState bipartite_tensor(const PureState& a, const PureState& b);

}  // namespace oneshot
