#pragma once

#include <cmath>
#include <vector>

#include "oneshot/linalg.hpp"

namespace test {

using namespace oneshot;

inline DensityMatrix diag_state(std::vector<double> p, Dims dims = {}) {
  if (dims.empty()) dims = {static_cast<int>(p.size())};
  return DensityMatrix::diagonal(dims, p);
}

/// sqrt(a)|00> + sqrt(1-a)|11> on two qubits.
inline PureState schmidt_pair(double a) {
  Vector v = Vector::Zero(4);
  v[0] = std::sqrt(a);
  v[3] = std::sqrt(1.0 - a);
  return PureState({2, 2}, v);
}

inline PureState ket00() { return schmidt_pair(1.0); }

inline DensityMatrix classically_correlated() { return diag_state({0.5, 0.0, 0.0, 0.5}, {2, 2}); }

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace test
