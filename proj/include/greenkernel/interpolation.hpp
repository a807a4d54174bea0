#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "greenkernel/kernel_catalog.hpp"
#include "greenkernel/poly_space.hpp"
#include "greenkernel/types.hpp"

namespace greenkernel {

// Scattered data: N pairwise-distinct sites (rows of `points`) and values.
struct Dataset {
  PointSet points;
  Eigen::VectorXd values;

  Eigen::Index size() const { return points.rows(); }
  int dim() const { return static_cast<int>(points.cols()); }
  // Throws ValidationError on shape mismatch, non-finite entries or
  // duplicate sites.
  void validate() const;
};

// A(j, k) = G(x_j - y_k), assembled in parallel over rows.
Eigen::MatrixXd kernel_matrix(const GreenKernel& kernel, const PointSet& x, const PointSet& y);
Eigen::MatrixXd kernel_matrix(const GreenKernel& kernel, const PointSet& x);

// Bordered system [A P; P^T 0] [c; beta] = [Y; 0].
struct GramSystem {
  Eigen::MatrixXd a;  // N x N
  Eigen::MatrixXd p;  // N x Q
  Eigen::VectorXd rhs;

  Eigen::MatrixXd block() const;
};

GramSystem assemble(const GreenKernel& kernel, const PolySpace& space, const Dataset& data, double ridge = 0.0);

struct FitOptions {
  // Optional ridge added to the diagonal of A (off by default).
  double ridge = 0.0;
  // Fits whose estimated condition number exceeds this fail.
  double max_condition = 1e15;
  // Post-fit check: max_j |s(x_j) - y_j| <= residual_tolerance * (1 + max|Y|).
  double residual_tolerance = 1e-9;
};

// s(x) = sum_j c_j G(x - x_j) + sum_k beta_k p_k(x). Immutable after fit.
class InterpolationModel {
 public:
  InterpolationModel(GreenKernel kernel, PolySpace space, PointSet centers, Eigen::VectorXd c, Eigen::VectorXd beta);

  const GreenKernel& kernel() const { return kernel_; }
  const PolySpace& space() const { return space_; }
  const PointSet& centers() const { return centers_; }
  const Eigen::VectorXd& c() const { return c_; }
  const Eigen::VectorXd& beta() const { return beta_; }
  double condition_estimate() const { return condition_; }

  double operator()(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  Eigen::VectorXd predict(const PointSet& points) const;
  // D^alpha s(x), term by term.
  double derivative(const Eigen::Ref<const Eigen::VectorXd>& x, const MultiIndex& alpha) const;
  Eigen::VectorXd derivatives(const Eigen::Ref<const Eigen::VectorXd>& x, const std::vector<MultiIndex>& alphas) const;

 private:
  friend InterpolationModel fit(const GreenKernel&, const PolySpace&, const Dataset&, const FitOptions&);

  GreenKernel kernel_;
  PolySpace space_;
  PointSet centers_;
  Eigen::VectorXd c_;
  Eigen::VectorXd beta_;
  double condition_ = 0.0;
};

InterpolationModel fit(const GreenKernel& kernel, const PolySpace& space, const Dataset& data,
                       const FitOptions& options = {});

// c^T A c over the model's centers (the native-space semi-norm squared).
double gram_quadratic_form(const InterpolationModel& model);
// sqrt(c^T A c), with round-off negatives down to -1e-12 ||c||^2 max|A|
// clamped to zero; larger negatives raise NumericalError.
double gram_seminorm(const InterpolationModel& model);

struct LoocvResult {
  double rms = 0.0;
  Eigen::VectorXd errors;  // y_k - s^{(k)}(x_k)
};

// Leave-one-out errors via e_k = c_k / (B^{-1})_{kk} on the bordered matrix B.
LoocvResult loocv_error(const GreenKernel& kernel, const PolySpace& space, const Dataset& data);
// The same quantity by N explicit refits.
LoocvResult loocv_error_brute_force(const GreenKernel& kernel, const PolySpace& space, const Dataset& data);

struct ScaleSweep {
  std::vector<double> scales;
  std::vector<double> errors;
  double best_scale = 0.0;
  double best_error = 0.0;
};

// LOOCV RMS error over candidate scales; ties go to the smallest scale.
ScaleSweep sweep_scales(const GreenKernel& kernel, const PolySpace& space, const Dataset& data,
                        const std::vector<double>& scales);

struct OrthogonalityReport {
  double large_squared = 0.0;       // |s_large|^2
  double small_squared = 0.0;       // |s_small|^2
  double difference_squared = 0.0;  // |s_large - s_small|^2 on the union centers
  double relative_gap = 0.0;
  bool holds = false;
};

// Minimum-norm Pythagoras identity |s_L|^2 = |s_S|^2 + |s_L - s_S|^2 when
// s_L interpolates a superset of s_S's data.
OrthogonalityReport orthogonality_check(const InterpolationModel& small, const InterpolationModel& large,
                                        double tolerance = 1e-8);

struct CpdCheckReport {
  int trials = 0;
  int max_points = 0;
  int strictly_positive = 0;  // trials with c^T A c > 0
  int within_tolerance = 0;   // trials with c^T A c > -1e-12 ||c||^2 max|A|
  double min_scaled = 0.0;    // min of c^T A c / (||c||^2 max|A|)
  bool passed = false;        // every trial within tolerance
};

// Stochastic certificate of conditional positive definiteness: each trial
// draws N in [Q + 1, max_points] points uniformly from the unit cube
// (redrawn until unisolvent) and a Gaussian c projected onto ker P^T.
CpdCheckReport cpd_check(const GreenKernel& kernel, const PolySpace& space, int trials, int max_points,
                         std::uint64_t seed);

}  // namespace greenkernel
