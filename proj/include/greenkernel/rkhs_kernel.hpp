#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "greenkernel/interpolation.hpp"
#include "greenkernel/kernel_catalog.hpp"
#include "greenkernel/poly_space.hpp"

namespace greenkernel {

// Positive definite reproducing kernel built from a conditionally positive
// definite Phi and a Lagrange basis q_k on a unisolvent set Xi:
//   K(x, y) = Phi(x - y) - sum_k q_k(x) Phi(xi_k - y) - sum_l q_l(y) Phi(x - xi_l)
//           + sum_{k,l} q_k(x) q_l(y) Phi(xi_k - xi_l) + sum_k q_k(x) q_k(y).
// The Q x Q table Phi(xi_k - xi_l) is computed once; K is evaluated lazily.
class RkKernel {
 public:
  RkKernel(GreenKernel phi, UnisolventSet xi_set);

  const GreenKernel& phi() const { return phi_; }
  const UnisolventSet& xi_set() const { return xi_set_; }
  const PolySpace& space() const { return xi_set_.space(); }

  double operator()(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y) const;
  // K(x_i, y_j) for all rows of x and y.
  Eigen::MatrixXd cross(const PointSet& x, const PointSet& y) const;
  // Symmetric Gram matrix K(x_i, x_j).
  Eigen::MatrixXd gram(const PointSet& points) const;

 private:
  GreenKernel phi_;
  UnisolventSet xi_set_;
  Eigen::MatrixXd phi_xi_;  // Phi(xi_k - xi_l)
};

// Validates that the dimensions agree, that xi_set was built for `space`
// and that `space` contains the null space of phi.
RkKernel build_rk(const GreenKernel& phi, const UnisolventSet& xi_set, const PolySpace& space);
// Xi chosen by select_unisolvent over `candidates` (typically the data sites).
RkKernel build_rk(const GreenKernel& phi, const PolySpace& space, const PointSet& candidates);

struct EquivalenceReport {
  double max_deviation = 0.0;  // max over the grid of |s_K - s_Phi|
  double k_residual = 0.0;     // max |s_K(x_j) - y_j|
  double phi_residual = 0.0;   // max |s_Phi(x_j) - y_j|
  bool xi_in_data = false;     // Xi is a subset of the data sites
  Eigen::VectorXd k_coefficients;
};

// Solves K-Gram c = Y and fits Phi with polynomial augmentation, then
// compares both interpolants on `grid`. The two agree when Xi lies inside
// the data sites.
EquivalenceReport check_equivalence(const RkKernel& rk, const Dataset& data, const PointSet& grid);

struct PdReport {
  int trials = 0;
  int n_points = 0;
  std::vector<double> min_eigenvalues;
  double min = 0.0;
  double max = 0.0;
  double median = 0.0;
  // Smallest value of (min eigenvalue) / (max |K_ij|) over the trials.
  double min_relative = 0.0;
  bool all_positive = false;  // every min eigenvalue > -1e-10 max|K_ij|
};

// Random points drawn uniformly from `lo`..`hi` (the unit cube by default).
PdReport check_pd(const RkKernel& rk, int trials, int n_points, std::uint64_t seed, double lo = 0.0,
                  double hi = 1.0);

double min_gram_eigenvalue(const RkKernel& rk, const PointSet& points);

}  // namespace greenkernel
