#include "oneshot/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "oneshot/error.hpp"

namespace oneshot {
namespace {

void check_same_shape(const DensityMatrix& a, const DensityMatrix& b) {
  require(a.dim() == b.dim(), ErrorCode::dimension_mismatch, "states have different dimensions");
}

void check_bipartite(const DensityMatrix& rho) {
  require(rho.subsystem_count() == 2, ErrorCode::dimension_mismatch,
          "expected a bipartite state with two subsystems");
}

}  // namespace

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  check_same_shape(rho, sigma);
  return trace_norm(psd_sqrt(rho.matrix()) * psd_sqrt(sigma.matrix()));
}

double fidelity(const PureState& a, const PureState& b) {
  require(a.dim() == b.dim(), ErrorCode::dimension_mismatch, "states have different dimensions");
  return std::abs(a.amplitudes().dot(b.amplitudes()));
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  check_same_shape(rho, sigma);
  const Matrix diff = rho.matrix() - sigma.matrix();
  require((diff - diff.adjoint()).cwiseAbs().maxCoeff() <= 1e-9, ErrorCode::invalid_argument,
          "trace_distance: difference is not Hermitian");
  return eigh(diff).values.cwiseAbs().sum();
}

double shannon_entropy(std::span<const double> p) {
  double h = 0.0;
  for (double x : p)
    if (x > 0.0) h -= x * std::log2(x);
  return h;
}

EntropyValue von_neumann_entropy(const DensityMatrix& rho) {
  const RealVector ev = rho.spectrum();
  return EntropyValue::of(shannon_entropy({ev.data(), static_cast<std::size_t>(ev.size())}));
}

EntropyValue relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma,
                              double rank_tol) {
  check_same_shape(rho, sigma);
  const HermitianEigenSystem rs = eigh(rho.matrix());
  const HermitianEigenSystem ss = eigh(sigma.matrix());
  // Weight of rho outside supp(sigma).
  double outside = 0.0;
  double cross = 0.0;  // Tr rho log sigma on the support of sigma
  for (Eigen::Index j = 0; j < ss.values.size(); ++j) {
    const double w = (ss.vectors.col(j).adjoint() * rho.matrix() * ss.vectors.col(j))(0, 0).real();
    if (ss.values[j] > rank_tol) {
      cross += w * std::log2(ss.values[j]);
    } else {
      outside += w;
    }
  }
  if (outside > rank_tol) return EntropyValue::infinite();
  double self = 0.0;
  for (Eigen::Index k = 0; k < rs.values.size(); ++k)
    if (rs.values[k] > 0.0) self += rs.values[k] * std::log2(rs.values[k]);
  return EntropyValue::of(self - cross);
}

EntropyValue renyi_relative(double alpha, const DensityMatrix& rho, const DensityMatrix& sigma,
                            double rank_tol) {
  require(alpha > 0.0 && alpha < 1.0, ErrorCode::invalid_argument,
          "renyi_relative: alpha must lie in (0,1)");
  check_same_shape(rho, sigma);
  const auto power = [&](double x, double a) { return x > rank_tol ? std::pow(x, a) : 0.0; };
  const Matrix ra = hermitian_function(rho.matrix(), [&](double x) { return power(x, alpha); });
  const Matrix sb =
      hermitian_function(sigma.matrix(), [&](double x) { return power(x, 1.0 - alpha); });
  const double tr = (ra * sb).trace().real();
  if (tr <= 0.0) return EntropyValue::infinite();
  return EntropyValue::of(std::log2(tr) / (alpha - 1.0));
}

EntropyValue s0_projected(const Matrix& p, const DensityMatrix& rho, const DensityMatrix& sigma,
                          double rank_tol) {
  check_same_shape(rho, sigma);
  require(p.rows() == rho.dim() && p.cols() == rho.dim(), ErrorCode::dimension_mismatch,
          "s0_projected: operator size mismatch");
  const RealVector pe = eigh(p).values;
  require(pe.minCoeff() >= -1e-9 && pe.maxCoeff() <= 1.0 + 1e-9, ErrorCode::invalid_argument,
          "s0_projected: operator must satisfy 0 <= P <= 1");
  const Matrix sp = psd_sqrt(p);
  const double tr =
      (sp * support_projector(rho, rank_tol) * sp * sigma.matrix()).trace().real();
  if (tr <= 0.0) return EntropyValue::infinite();
  return EntropyValue::of(-std::log2(tr));
}

double min_entropy(std::span<const double> spectrum) {
  require(!spectrum.empty(), ErrorCode::invalid_argument, "min_entropy: empty spectrum");
  return -std::log2(*std::max_element(spectrum.begin(), spectrum.end()));
}

EntropyValue min_entropy(const DensityMatrix& rho) {
  return EntropyValue::of(-std::log2(rho.spectrum()[0]));
}

EntropyValue coherent_information(const DensityMatrix& rho_ab) {
  check_bipartite(rho_ab);
  const double sb = von_neumann_entropy(partial_trace(rho_ab, 1)).value;
  return EntropyValue::of(sb - von_neumann_entropy(rho_ab).value);
}

EntropyValue conditional_zero_entropy(const Matrix& x, const Dims& dims) {
  require(dims.size() == 2, ErrorCode::dimension_mismatch, "expected a bipartite operator");
  const double top = eigh(partial_trace(x, dims, {1})).values[0];
  if (top <= 0.0) return EntropyValue::infinite();
  return EntropyValue::of(-std::log2(top));
}

EntropyValue zero_coherent_information(const DensityMatrix& rho_ab, double rank_tol) {
  check_bipartite(rho_ab);
  return conditional_zero_entropy(support_projector(rho_ab, rank_tol), rho_ab.dims());
}

}  // namespace oneshot
