#pragma once

#include <vector>

#include <Eigen/Core>

namespace greenkernel {

// Point sets are stored row-wise: one point per row, one coordinate per column.
using PointSet = Eigen::MatrixXd;
using Point = Eigen::VectorXd;

// Exponent vector of a partial derivative D^alpha or a monomial x^alpha.
using MultiIndex = std::vector<int>;

inline int order(const MultiIndex& alpha) {
  int total = 0;
  for (int a : alpha) total += a;
  return total;
}

}  // namespace greenkernel
