#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "greenkernel/poly_space.hpp"
#include "greenkernel/types.hpp"

namespace greenkernel {

enum class KernelKind {
  cubic,
  tension,
  sobolev1d,
  compare_k_s,
  thin_plate,
  laplacian_tps,
  polyharmonic,
  matern,
  gaussian,
  regularized_log_bessel,
};

// Plain descriptor; mirrors the JSON form {name, dim, scale?, smoothness?,
// regularization?}.
struct KernelSpec {
  std::string name;
  int dim = 1;
  std::optional<double> scale;
  std::optional<int> smoothness;
  std::optional<double> regularization;
};

// How the kernel (and the derivatives of interpolants built from it) decays
// away from the centers; used to size quadrature boxes.
enum class Decay { algebraic, exponential };

// Even, translation-invariant Green function G of L = P*^T P with closed-form
// evaluation, derivatives and generalized Fourier transform.
//
// Entries and the operator L they invert:
//   cubic                  |x|^3/12                       d^4/dx^4
//   tension                -(e^{-s|x|} + s|x|)/(2 s^3)    d^4/dx^4 - s^2 d^2/dx^2
//   sobolev1d              (1 + s|x|) e^{-s|x|}/(4 s^3)   (s^2 - d^2/dx^2)^2
//   compare_k_s            e^{-sqrt3/2 |x|} sin(|x|/2 + pi/6)   (I - d^2/dx^2 + d^4/dx^4)/sqrt3
//   thin_plate             |x|^2 log|x| / (8 pi)          Laplacian^2 on R^2
//   laplacian_tps          same function as thin_plate, paired with P = Laplacian
//   polyharmonic (m)       c_{d,m} |x|^{2m-d} [log|x|]    (-Laplacian)^m
//   matern (n)             c_{d,n} (s|x|)^{n-d/2} K_{d/2-n}(s|x|)   (s^2 - Laplacian)^n
//   gaussian               s^d pi^{-d/2} e^{-s^2 |x|^2}   exp(-Laplacian/(4 s^2))
//   regularized_log_bessel -(K_0(s|x| + r) + log(s|x| + r))/(2 pi s^2), the
//                          shifted Green function of Laplacian^2 - s^2 Laplacian;
//                          no CPD guarantee.
//
// All descriptors are immutable; every method is safe to call concurrently.
class GreenKernel {
 public:
  explicit GreenKernel(const KernelSpec& spec);

  static const std::vector<std::string>& names();

  KernelKind kind() const { return kind_; }
  const std::string& name() const { return spec_.name; }
  int dim() const { return spec_.dim; }
  std::optional<double> scale() const { return spec_.scale; }
  std::optional<int> smoothness() const { return spec_.smoothness; }
  std::optional<double> regularization() const { return spec_.regularization; }
  // Descriptor with defaults filled in.
  const KernelSpec& spec() const { return spec_; }

  // Copy with another scale parameter (for scale sweeps).
  GreenKernel with_scale(double scale) const;

  // Minimal order m for which the catalog asserts conditional positive
  // definiteness; the interpolation null space is pi_{m-1}(R^d).
  int cpd_order() const;
  bool cpd_guaranteed() const { return kind_ != KernelKind::regularized_log_bessel; }
  PolySpace null_space() const { return PolySpace::total_degree(dim(), cpd_order() - 1); }

  double evaluate(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  // G as a function of r = |x|.
  double radial(double r) const;

  // D^alpha G(x). Closed form for every entry except regularized_log_bessel,
  // which uses nested central differences with h = eps^{1/3} (1 + |x|).
  // Throws NumericalError at the origin when G is not |alpha| times
  // differentiable there.
  double derivative(const Eigen::Ref<const Eigen::VectorXd>& x, const MultiIndex& alpha) const;
  // D^alpha G(x) for several multi-indices at one point, sharing the radial work.
  Eigen::VectorXd derivatives(const Eigen::Ref<const Eigen::VectorXd>& x, const std::vector<MultiIndex>& alphas) const;
  bool closed_form_derivatives() const { return kind_ != KernelKind::regularized_log_bessel; }
  // Largest k with G in C^k near the origin (derivative queries of higher
  // order at x = 0 are errors).
  int origin_smoothness() const;

  // Closed-form symbol l^(omega) of L.
  double l_symbol(const Eigen::Ref<const Eigen::VectorXd>& omega) const;
  // Generalized Fourier transform (2 pi)^{-d/2} / l^(omega).
  double fourier_symbol(const Eigen::Ref<const Eigen::VectorXd>& omega) const;

  Decay decay() const;
  // Exponential decay rate of G and its derivatives (0 for algebraic decay).
  double decay_rate() const;

 private:
  double radial_derivative_1d(int k, double r) const;
  double t_derivative(int k, double r) const;
  double hermite_derivative(const Eigen::Ref<const Eigen::VectorXd>& x, const MultiIndex& alpha) const;
  double finite_difference(const Eigen::Ref<const Eigen::VectorXd>& x, const MultiIndex& alpha) const;
  double sigma() const { return spec_.scale.value_or(1.0); }

  KernelKind kind_;
  KernelSpec spec_;
  double norm_ = 1.0;  // leading normalization constant of the entry
};

KernelKind kernel_kind_from_name(const std::string& name);

}  // namespace greenkernel
