#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "greenkernel/interpolation.hpp"
#include "greenkernel/operator_symbols.hpp"

namespace greenkernel {

struct QuadSpec {
  // The box grows until the estimated omitted mass is below
  // tail_tolerance * (integral so far).
  double tail_tolerance = 1e-12;
  // Target relative accuracy of the panel quadrature.
  double relative_tolerance = 1e-10;
  // Truncation order for closed-form (infinite) operator entries.
  std::optional<int> n_max;
  // Integrate over this box only: no growth, no tail estimate.
  std::optional<Eigen::VectorXd> box_lo;
  std::optional<Eigen::VectorXd> box_hi;
  int max_rings = 40;
  int max_depth_1d = 30;
  int max_depth_2d = 12;
};

struct SeminormReport {
  double gram_value = 0.0;        // c^T A c
  double quadrature_value = 0.0;  // sum_j int |P_j s|^2
  std::vector<double> per_operator;
  Eigen::VectorXd domain_lo;
  Eigen::VectorXd domain_hi;
  double tail_bound = 0.0;
  double quadrature_error = 0.0;  // panel error estimate
  long panels = 0;
  int rings = 0;
  std::optional<int> n_max;
  std::optional<double> truncation_remainder;
  double relative_gap = 0.0;  // |gram - quadrature| / max(gram, quadrature)
};

// (P_1 s(x), ..., P_J s(x)) applied term by term to kernel and polynomial parts.
Eigen::VectorXd apply_operator(const OperatorVector& op, const InterpolationModel& model,
                               const Eigen::Ref<const Eigen::VectorXd>& x);

// Integrates |P_j s|^2 by adaptive GL15 panels (d = 1 or 2). Panel edges
// pass through every center coordinate. The box starts at the hull of the
// centers and is doubled outward until the tail estimate from the kernel's
// decay is small (capped at hull + 50/rate for exponential decay).
SeminormReport hp_seminorm(const InterpolationModel& model, const OperatorVector& op, const QuadSpec& spec = {});

struct ScaledComparison {
  SeminormReport a;
  SeminormReport b;
  double ratio = 0.0;  // b / a, NaN when both vanish
  // Contribution of operator entries grouped by derivative order.
  std::vector<double> order_contributions_a;
  std::vector<double> order_contributions_b;
};

ScaledComparison compare_scaled_spaces(const InterpolationModel& model, const OperatorVector& op_a,
                                       const OperatorVector& op_b, const QuadSpec& spec = {});

}  // namespace greenkernel
