#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "greenkernel/kernel_catalog.hpp"
#include "greenkernel/types.hpp"

namespace greenkernel {

struct DifferentialTerm {
  MultiIndex alpha;
  double coeff = 1.0;
};

// One component P_j of a vector operator P. Differential entries carry their
// constant real coefficients, sum_alpha c_alpha D^alpha, with symbol
// sum_alpha c_alpha (i omega)^alpha. Closed-form entries carry only a named
// symbol; the one supported is "gaussian_heat" with
// p^(omega) = exp(|omega|^2 / (8 scale^2)).
struct OperatorEntry {
  enum class Type { differential, closed_form };

  Type type = Type::differential;
  std::vector<DifferentialTerm> terms;
  std::string name;
  double scale = 1.0;

  static OperatorEntry differential(std::vector<DifferentialTerm> terms);
  static OperatorEntry closed_form(std::string name, double scale);

  std::complex<double> symbol(const Eigen::Ref<const Eigen::VectorXd>& omega) const;
  // log |p^(omega)|^2, finite even where the symbol itself would overflow.
  double log_abs_symbol_squared(const Eigen::Ref<const Eigen::VectorXd>& omega) const;
  // Highest derivative order; -1 for closed-form entries.
  int order() const;
};

class OperatorVector {
 public:
  OperatorVector() = default;
  OperatorVector(int dim, int claimed_order, std::vector<OperatorEntry> entries);

  int dim() const { return dim_; }
  int claimed_order() const { return claimed_order_; }
  const std::vector<OperatorEntry>& entries() const { return entries_; }
  bool is_differential() const;

  // l^(omega) = sum_j |p^_j(omega)|^2
  double l_symbol(const Eigen::Ref<const Eigen::VectorXd>& omega) const;
  double log_l_symbol(const Eigen::Ref<const Eigen::VectorXd>& omega) const;

  // Replaces every closed-form entry by its differential expansion
  //   Q_n = (n! 4^n s^{2n})^{-1/2} Laplacian^k [grad],  n = 2k [2k+1],
  // for n = 0..n_max.
  OperatorVector truncated(int n_max) const;

 private:
  int dim_ = 1;
  int claimed_order_ = 0;
  std::vector<OperatorEntry> entries_;
};

// P with L = P*^T P for each catalog entry. regularized_log_bessel gets the
// operator (Laplacian, s grad) of the unshifted Green function it derives
// from.
OperatorVector operator_for(const GreenKernel& kernel);

// Terms of coeff * Laplacian^k D^extra in dim variables.
std::vector<DifferentialTerm> laplacian_power(int dim, int k, double coeff, const MultiIndex& extra);

inline constexpr std::uint64_t kDefaultSeed = 0x5EED;

struct OrderEstimate {
  int order = 0;       // round(slope / 2)
  double slope = 0.0;  // mean slope of log l^ against log |omega|
  std::vector<double> direction_slopes;
};

struct OrderEstimateOptions {
  double radius_min = 1e-4;
  double radius_max = 1e-2;
  int radii = 32;
  int directions = 8;
  std::uint64_t seed = kDefaultSeed;
  double slope_tolerance = 0.05;
};

// Least-squares slope of log l^ against log |omega| along random directions.
// Throws NumericalError ("no uniform order") when a direction's slope is off
// 2 * order by more than the tolerance or l^ is not positive on the samples.
OrderEstimate estimate_cpd_order(const OperatorVector& op, const OrderEstimateOptions& options = {});

struct HypothesisReport {
  double min_l = 0.0;             // min of l^ over sampled shells
  double min_l_radius = 0.0;      // shell radius where the minimum occurred
  bool positive_on_samples = false;
  double growth_exponent = 0.0;   // slope of log(1/l^) against log |omega| at infinity
  bool slowly_increasing = false; // growth exponent finite on the samples
  double origin_slope = 0.0;
  bool uniform_origin_order = false;
  int origin_order = -1;
  std::string note;
};

struct HypothesisSampling {
  double shell_min = 1e-3;
  double shell_max = 1e3;
  int shells = 61;
  double growth_min = 1e2;
  double growth_max = 1e3;
  int growth_radii = 16;
  int directions = 8;
  std::uint64_t seed = kDefaultSeed;
};

// Samples the hypotheses of the Green-function CPD theorem: l^ positive away
// from 0, 1/l^ slowly increasing, l^ = Theta(|omega|^{2m}) at 0. Passing is
// meant in the sampled, falsifiable sense only.
HypothesisReport check_theorem_hypotheses(const OperatorVector& op, const HypothesisSampling& sampling = {});

}  // namespace greenkernel
