#pragma once

#include <array>
#include <functional>
#include <vector>

#include <Eigen/Core>

namespace greenkernel::quadrature {

// 15-point Gauss-Legendre rule on [-1, 1].
struct Rule {
  std::array<double, 15> nodes;
  std::array<double, 15> weights;
};
const Rule& gauss_legendre15();

struct Interval {
  double a = 0.0;
  double b = 0.0;
};

struct Cell {
  double x0 = 0.0, x1 = 0.0;
  double y0 = 0.0, y1 = 0.0;
};

struct Options {
  // Total absolute error target, shared among the input panels in
  // proportion to their measure.
  double abs_tol = 1e-12;
  int max_depth = 30;
};

struct Result {
  Eigen::VectorXd values;
  double error_estimate = 0.0;  // sum of |fine - coarse| over accepted panels
  long panels = 0;              // accepted leaf panels
  long depth_capped = 0;        // leaves accepted at max_depth
};

// Vector-valued integrands: every component is integrated simultaneously.
using Integrand1d = std::function<Eigen::VectorXd(double)>;
using Integrand2d = std::function<Eigen::VectorXd(double, double)>;

// Each panel is bisected until GL15 on the panel and on its two halves agree
// to the panel's share of the tolerance. Panels are processed in parallel and
// summed in input order, so the result does not depend on the thread count.
Result integrate_1d(const Integrand1d& f, const std::vector<Interval>& panels, int components,
                    const Options& options = {});
// Tensor GL15 x GL15 on cells with quadrisection refinement.
Result integrate_2d(const Integrand2d& f, const std::vector<Cell>& cells, int components,
                    const Options& options = {});

}  // namespace greenkernel::quadrature
