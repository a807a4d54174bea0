#include "greenkernel/kernel_catalog.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "greenkernel/bessel.hpp"
#include "greenkernel/errors.hpp"

namespace greenkernel {
namespace {

using std::numbers::pi;

const double kSqrt3 = std::sqrt(3.0);

double factorial(int n) {
  static const std::array<double, 171> table = [] {
    std::array<double, 171> t{};
    t[0] = 1.0;
    for (std::size_t i = 1; i < t.size(); ++i) t[i] = t[i - 1] * static_cast<double>(i);
    return t;
  }();
  return table[static_cast<std::size_t>(n)];
}

double int_power(double x, int n) {
  double v = 1.0;
  for (int i = 0; i < n; ++i) v *= x;
  return v;
}

// G(x) = F(t) with t = |x|^2/2, so D^alpha G is a sum over j <= alpha/2 of
//   prod_i alpha_i! / (j_i! (alpha_i - 2 j_i)! 2^{j_i}) x_i^{alpha_i - 2 j_i}
// times F^{(|alpha| - |j|)}(t); f[k] holds F^{(k)}.
double faa_di_bruno(const Eigen::Ref<const Eigen::VectorXd>& x, const MultiIndex& alpha, int total,
                    const std::vector<double>& f) {
  const int d = static_cast<int>(x.size());
  double sum = 0.0;
  auto recurse = [&](auto&& self, int axis, double coeff, int j_total) -> void {
    if (axis == d) {
      sum += coeff * f[static_cast<std::size_t>(total - j_total)];
      return;
    }
    const int a = alpha[static_cast<std::size_t>(axis)];
    for (int ji = 0; 2 * ji <= a; ++ji) {
      const int power = a - 2 * ji;
      if (power > 0 && x(axis) == 0.0) continue;
      const double c = factorial(a) / (factorial(ji) * factorial(power) * std::ldexp(1.0, ji)) * int_power(x(axis), power);
      self(self, axis + 1, coeff * c, j_total + ji);
    }
  };
  recurse(recurse, 0, 1.0, 0);
  return sum;
}

bool is_one_dimensional(KernelKind kind) {
  return kind == KernelKind::cubic || kind == KernelKind::tension || kind == KernelKind::sobolev1d ||
         kind == KernelKind::compare_k_s;
}

bool takes_scale(KernelKind kind) {
  return kind == KernelKind::tension || kind == KernelKind::sobolev1d || kind == KernelKind::matern ||
         kind == KernelKind::gaussian || kind == KernelKind::regularized_log_bessel;
}

bool takes_smoothness(KernelKind kind) {
  return kind == KernelKind::polyharmonic || kind == KernelKind::matern;
}

// Coefficients (ascending powers of z) of the polynomial P with
// z^{k+1/2} K_{k+1/2}(z) = sqrt(pi/2) e^{-z} P(z).
std::vector<double> half_integer_bessel_polynomial(int k) {
  std::vector<double> poly(static_cast<std::size_t>(k + 1), 0.0);
  for (int j = 0; j <= k; ++j) {
    poly[static_cast<std::size_t>(k - j)] = factorial(k + j) / (factorial(j) * factorial(k - j) * std::ldexp(1.0, j));
  }
  return poly;
}

double horner(const std::vector<double>& poly, double z) {
  double v = 0.0;
  for (auto it = poly.rbegin(); it != poly.rend(); ++it) v = v * z + *it;
  return v;
}

double hermite(int n, double u) {
  double h0 = 1.0;
  if (n == 0) return h0;
  double h1 = 2.0 * u;
  for (int k = 1; k < n; ++k) {
    const double h2 = 2.0 * u * h1 - 2.0 * k * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

}  // namespace

const std::vector<std::string>& GreenKernel::names() {
  static const std::vector<std::string> all = {
      "cubic",  "tension", "sobolev1d", "compare_k_s", "thin_plate", "laplacian_tps", "polyharmonic",
      "matern", "gaussian", "regularized_log_bessel"};
  return all;
}

KernelKind kernel_kind_from_name(const std::string& name) {
  static const KernelKind kinds[] = {
      KernelKind::cubic,         KernelKind::tension,      KernelKind::sobolev1d, KernelKind::compare_k_s,
      KernelKind::thin_plate,    KernelKind::laplacian_tps, KernelKind::polyharmonic, KernelKind::matern,
      KernelKind::gaussian,      KernelKind::regularized_log_bessel};
  const auto& all = GreenKernel::names();
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (all[i] == name) return kinds[i];
  }
  throw ValidationError("unknown kernel name '" + name + "'");
}

GreenKernel::GreenKernel(const KernelSpec& spec) : kind_(kernel_kind_from_name(spec.name)), spec_(spec) {
  const int d = spec_.dim;
  if (d < 1) throw ValidationError("kernel dimension must be >= 1");
  if (is_one_dimensional(kind_) && d != 1) {
    throw ValidationError(spec_.name + " is defined for dim = 1 only");
  }
  if ((kind_ == KernelKind::thin_plate || kind_ == KernelKind::laplacian_tps ||
       kind_ == KernelKind::regularized_log_bessel) &&
      d != 2) {
    throw ValidationError(spec_.name + " is defined for dim = 2 only");
  }

  if (takes_scale(kind_)) {
    if (!spec_.scale) spec_.scale = 1.0;
    if (!(std::isfinite(*spec_.scale) && *spec_.scale > 0.0)) {
      throw ValidationError(spec_.name + " requires a positive finite scale");
    }
  } else if (spec_.scale) {
    throw ValidationError(spec_.name + " takes no scale parameter");
  }

  if (takes_smoothness(kind_)) {
    if (!spec_.smoothness) spec_.smoothness = d / 2 + 1;
    if (*spec_.smoothness < 1 || 2 * *spec_.smoothness <= d) {
      throw ValidationError(spec_.name + " requires smoothness m with 2m > dim");
    }
    if (*spec_.smoothness > 12) throw ValidationError(spec_.name + " smoothness above 12 is not supported");
  } else if (spec_.smoothness) {
    throw ValidationError(spec_.name + " takes no smoothness parameter");
  }

  if (kind_ == KernelKind::regularized_log_bessel) {
    if (!spec_.regularization || !(std::isfinite(*spec_.regularization) && *spec_.regularization > 0.0)) {
      throw ValidationError("regularized_log_bessel requires a positive regularization r");
    }
  } else if (spec_.regularization) {
    throw ValidationError(spec_.name + " takes no regularization parameter");
  }

  const double s = sigma();
  switch (kind_) {
    case KernelKind::cubic:
      norm_ = 1.0 / 12.0;
      break;
    case KernelKind::tension:
      norm_ = -1.0 / (2.0 * s * s * s);
      break;
    case KernelKind::sobolev1d:
      norm_ = 1.0 / (4.0 * s * s * s);
      break;
    case KernelKind::compare_k_s:
      norm_ = 1.0;
      break;
    case KernelKind::thin_plate:
    case KernelKind::laplacian_tps:
      norm_ = 1.0 / (8.0 * pi);
      break;
    case KernelKind::polyharmonic: {
      const int m = *spec_.smoothness;
      if (d % 2 == 1) {
        norm_ = std::tgamma(d / 2.0 - m) / (std::ldexp(1.0, 2 * m) * std::pow(pi, d / 2.0) * factorial(m - 1));
      } else {
        const double sign = ((m + d / 2 - 1) % 2 == 0) ? 1.0 : -1.0;
        norm_ = sign / (std::ldexp(1.0, 2 * m - 1) * std::pow(pi, d / 2.0) * factorial(m - 1) *
                        factorial(m - d / 2));
      }
      break;
    }
    case KernelKind::matern: {
      const int n = *spec_.smoothness;
      norm_ = std::pow(2.0, 1.0 - n - d / 2.0) / (std::pow(pi, d / 2.0) * std::tgamma(n) * std::pow(s, 2.0 * n - d));
      break;
    }
    case KernelKind::gaussian:
      norm_ = std::pow(s, d) / std::pow(pi, d / 2.0);
      break;
    case KernelKind::regularized_log_bessel:
      norm_ = -1.0 / (2.0 * pi * s * s);
      break;
  }
}

GreenKernel GreenKernel::with_scale(double scale) const {
  KernelSpec spec = spec_;
  spec.scale = scale;
  return GreenKernel(spec);
}

int GreenKernel::cpd_order() const {
  switch (kind_) {
    case KernelKind::cubic:
    case KernelKind::thin_plate:
    case KernelKind::laplacian_tps:
      return 2;
    case KernelKind::tension:
    case KernelKind::regularized_log_bessel:
      return 1;
    case KernelKind::polyharmonic:
      return *spec_.smoothness;
    case KernelKind::sobolev1d:
    case KernelKind::compare_k_s:
    case KernelKind::matern:
    case KernelKind::gaussian:
      return 0;
  }
  return 0;
}

double GreenKernel::evaluate(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (x.size() != dim()) throw ValidationError("point dimension does not match the kernel");
  return radial(x.norm());
}

double GreenKernel::radial(double r) const {
  const double s = sigma();
  switch (kind_) {
    case KernelKind::cubic:
      return norm_ * r * r * r;
    case KernelKind::tension:
      return norm_ * (std::exp(-s * r) + s * r);
    case KernelKind::sobolev1d:
      return norm_ * (1.0 + s * r) * std::exp(-s * r);
    case KernelKind::compare_k_s:
      return std::exp(-0.5 * kSqrt3 * r) * std::sin(0.5 * r + pi / 6.0);
    case KernelKind::thin_plate:
    case KernelKind::laplacian_tps:
      return r == 0.0 ? 0.0 : norm_ * r * r * std::log(r);
    case KernelKind::polyharmonic: {
      const int p = 2 * *spec_.smoothness - dim();
      if (dim() % 2 == 1) return norm_ * std::pow(r, p);
      return r == 0.0 ? 0.0 : norm_ * std::pow(r, p) * std::log(r);
    }
    case KernelKind::matern: {
      const double nu = *spec_.smoothness - dim() / 2.0;
      return norm_ * bessel::scaled_k(nu, s * r);
    }
    case KernelKind::gaussian:
      return norm_ * std::exp(-s * s * r * r);
    case KernelKind::regularized_log_bessel: {
      const double u = s * r + *spec_.regularization;
      return norm_ * (bessel::k(0.0, u) + std::log(u));
    }
  }
  return 0.0;
}

int GreenKernel::origin_smoothness() const {
  switch (kind_) {
    case KernelKind::cubic:
    case KernelKind::tension:
    case KernelKind::sobolev1d:
    case KernelKind::compare_k_s:
      return 2;
    case KernelKind::thin_plate:
    case KernelKind::laplacian_tps:
      return 1;
    case KernelKind::regularized_log_bessel:
      return 0;
    case KernelKind::polyharmonic:
      return 2 * *spec_.smoothness - dim() - 1;
    case KernelKind::matern:
      return 2 * *spec_.smoothness - dim() - 1;
    case KernelKind::gaussian:
      return std::numeric_limits<int>::max();
  }
  return 0;
}

double GreenKernel::derivative(const Eigen::Ref<const Eigen::VectorXd>& x, const MultiIndex& alpha) const {
  if (x.size() != dim() || static_cast<int>(alpha.size()) != dim()) {
    throw ValidationError("derivative: point or multi-index dimension does not match the kernel");
  }
  for (int a : alpha) {
    if (a < 0) throw ValidationError("derivative: negative multi-index entry");
  }
  const int total = order(alpha);
  if (total == 0) return evaluate(x);
  if (kind_ == KernelKind::gaussian) return hermite_derivative(x, alpha);

  const double r = x.norm();
  if (r == 0.0 && total > origin_smoothness()) {
    std::ostringstream os;
    os << spec_.name << " is not " << total << " times differentiable at the origin";
    throw NumericalError(os.str());
  }
  // Odd derivatives of an even function vanish at the origin.
  if (r == 0.0 && total % 2 == 1) return 0.0;
  if (kind_ == KernelKind::regularized_log_bessel) return finite_difference(x, alpha);

  if (dim() == 1) {
    const int k = alpha[0];
    if (r == 0.0 && k % 2 == 1) return 0.0;
    const double value = radial_derivative_1d(k, r);
    return (x(0) < 0.0 && k % 2 == 1) ? -value : value;
  }

  std::vector<double> f(static_cast<std::size_t>(total + 1), 0.0);
  for (int k = (total + 1) / 2; k <= total; ++k) f[static_cast<std::size_t>(k)] = t_derivative(k, r);
  return faa_di_bruno(x, alpha, total, f);
}

Eigen::VectorXd GreenKernel::derivatives(const Eigen::Ref<const Eigen::VectorXd>& x,
                                         const std::vector<MultiIndex>& alphas) const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(alphas.size()));
  const bool radial_route = dim() > 1 && kind_ != KernelKind::gaussian && kind_ != KernelKind::regularized_log_bessel;
  const double r = x.norm();
  if (!radial_route || r == 0.0 || x.size() != dim()) {
    for (std::size_t i = 0; i < alphas.size(); ++i) out(static_cast<Eigen::Index>(i)) = derivative(x, alphas[i]);
    return out;
  }
  int lo = std::numeric_limits<int>::max(), hi = 0;
  for (const auto& a : alphas) {
    if (static_cast<int>(a.size()) != dim()) throw ValidationError("derivative: multi-index dimension does not match the kernel");
    for (int ai : a) {
      if (ai < 0) throw ValidationError("derivative: negative multi-index entry");
    }
    const int total = order(a);
    if (total == 0) continue;
    lo = std::min(lo, (total + 1) / 2);
    hi = std::max(hi, total);
  }
  // One radial table serves every multi-index.
  std::vector<double> f(static_cast<std::size_t>(hi + 1), 0.0);
  for (int k = lo; k <= hi; ++k) f[static_cast<std::size_t>(k)] = t_derivative(k, r);
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    const int total = order(alphas[i]);
    out(static_cast<Eigen::Index>(i)) = total == 0 ? radial(r) : faa_di_bruno(x, alphas[i], total, f);
  }
  return out;
}

double GreenKernel::radial_derivative_1d(int k, double r) const {
  const double s = sigma();
  switch (kind_) {
    case KernelKind::cubic: {
      static const double table[] = {1.0, 3.0, 6.0, 6.0};
      if (k > 3) return 0.0;
      return norm_ * table[k] * std::pow(r, 3 - k);
    }
    case KernelKind::tension:
      if (k == 1) return norm_ * s * (1.0 - std::exp(-s * r));
      return norm_ * std::pow(-s, k) * std::exp(-s * r);
    case KernelKind::sobolev1d:
      return norm_ * std::pow(-s, k) * (1.0 + s * r - k) * std::exp(-s * r);
    case KernelKind::compare_k_s:
      // -sqrt3/2 + i/2 = e^{i 5 pi/6}, so each derivative rotates the phase.
      return std::exp(-0.5 * kSqrt3 * r) * std::sin(0.5 * r + pi / 6.0 + 5.0 * pi * k / 6.0);
    case KernelKind::polyharmonic: {
      const int p = 2 * *spec_.smoothness - 1;
      if (k > p) return 0.0;
      double falling = 1.0;
      for (int i = 0; i < k; ++i) falling *= p - i;
      return norm_ * falling * std::pow(r, p - k);
    }
    case KernelKind::matern: {
      auto poly = half_integer_bessel_polynomial(*spec_.smoothness - 1);
      // d/dr [P(s r) e^{-s r}] = s (P' - P)(s r) e^{-s r}
      for (int step = 0; step < k; ++step) {
        std::vector<double> next(poly.size(), 0.0);
        for (std::size_t i = 0; i < poly.size(); ++i) {
          next[i] = -poly[i] + (i + 1 < poly.size() ? (i + 1.0) * poly[i + 1] : 0.0);
        }
        poly = std::move(next);
      }
      const double z = s * r;
      return norm_ * std::sqrt(pi / 2.0) * std::pow(s, k) * horner(poly, z) * std::exp(-z);
    }
    default:
      break;
  }
  throw NumericalError("no one-dimensional radial derivative for " + spec_.name);
}

// F^{(k)}(t) where G(x) = F(|x|^2/2), i.e. ((1/r) d/dr)^k applied to the
// radial profile.
double GreenKernel::t_derivative(int k, double r) const {
  const double s = sigma();
  switch (kind_) {
    case KernelKind::thin_plate:
    case KernelKind::laplacian_tps:
    case KernelKind::polyharmonic: {
      const int p = kind_ == KernelKind::polyharmonic ? 2 * *spec_.smoothness - dim() : 2;
      const bool logarithmic = dim() % 2 == 0;
      // profile a r^q log r + b r^q; (1/r d/dr) maps (a, b, q) to (a q, a + b q, q - 2)
      double a = norm_;
      double b = 0.0;
      int q = p;
      for (int step = 0; step < k; ++step) {
        if (logarithmic) {
          b = a + b * q;
          a = a * q;
        } else {
          a = a * q;
        }
        q -= 2;
      }
      if (r == 0.0) {
        if (q > 0) return 0.0;
        if (q == 0 && !logarithmic) return a;
        throw NumericalError(spec_.name + " derivative is singular at the origin");
      }
      const double rq = std::pow(r, q);
      return logarithmic ? a * rq * std::log(r) + b * rq : a * rq;
    }
    case KernelKind::matern: {
      const double nu = *spec_.smoothness - dim() / 2.0;
      // (1/r d/dr) (s r)^nu K_nu(s r) = -s^2 (s r)^{nu-1} K_{nu-1}(s r)
      const double value = std::pow(-s * s, k) * norm_ * bessel::scaled_k(nu - k, s * r);
      if (!std::isfinite(value)) throw NumericalError("matern derivative is singular at the origin");
      return value;
    }
    case KernelKind::gaussian:
      return std::pow(-2.0 * s * s, k) * radial(r);
    default:
      break;
  }
  throw NumericalError("no closed-form derivative for " + spec_.name + " in dim " + std::to_string(dim()));
}

double GreenKernel::hermite_derivative(const Eigen::Ref<const Eigen::VectorXd>& x, const MultiIndex& alpha) const {
  // D^n e^{-s^2 u^2} = (-s)^n H_n(s u) e^{-s^2 u^2}, applied per coordinate.
  const double s = sigma();
  double value = norm_;
  for (int i = 0; i < dim(); ++i) {
    const int n = alpha[static_cast<std::size_t>(i)];
    const double u = x(i);
    value *= std::pow(-s, n) * hermite(n, s * u) * std::exp(-s * s * u * u);
  }
  return value;
}

double GreenKernel::finite_difference(const Eigen::Ref<const Eigen::VectorXd>& x, const MultiIndex& alpha) const {
  const double h = std::cbrt(std::numeric_limits<double>::epsilon()) * (1.0 + x.norm());
  auto recurse = [&](auto&& self, const Eigen::VectorXd& point, MultiIndex remaining) -> double {
    for (std::size_t i = 0; i < remaining.size(); ++i) {
      if (remaining[i] == 0) continue;
      --remaining[i];
      Eigen::VectorXd plus = point;
      Eigen::VectorXd minus = point;
      plus(static_cast<Eigen::Index>(i)) += h;
      minus(static_cast<Eigen::Index>(i)) -= h;
      return (self(self, plus, remaining) - self(self, minus, remaining)) / (2.0 * h);
    }
    return radial(point.norm());
  };
  return recurse(recurse, Eigen::VectorXd(x), alpha);
}

double GreenKernel::l_symbol(const Eigen::Ref<const Eigen::VectorXd>& omega) const {
  if (omega.size() != dim()) throw ValidationError("frequency dimension does not match the kernel");
  const double s = sigma();
  const double w2 = omega.squaredNorm();
  switch (kind_) {
    case KernelKind::cubic:
    case KernelKind::thin_plate:
    case KernelKind::laplacian_tps:
      return w2 * w2;
    case KernelKind::tension:
      return w2 * w2 + s * s * w2;
    case KernelKind::sobolev1d:
      return (s * s + w2) * (s * s + w2);
    case KernelKind::compare_k_s:
      return (1.0 + w2 + w2 * w2) / kSqrt3;
    case KernelKind::polyharmonic:
      return std::pow(w2, *spec_.smoothness);
    case KernelKind::matern:
      return std::pow(s * s + w2, *spec_.smoothness);
    case KernelKind::gaussian:
      return std::exp(w2 / (4.0 * s * s));
    case KernelKind::regularized_log_bessel:
      break;
  }
  throw ValidationError("regularized_log_bessel is not a Green function and has no Fourier symbol");
}

double GreenKernel::fourier_symbol(const Eigen::Ref<const Eigen::VectorXd>& omega) const {
  const double l = l_symbol(omega);
  if (l == 0.0) throw ValidationError(spec_.name + ": the generalized Fourier transform is singular at omega = 0");
  return std::pow(2.0 * pi, -dim() / 2.0) / l;
}

Decay GreenKernel::decay() const { return decay_rate() > 0.0 ? Decay::exponential : Decay::algebraic; }

double GreenKernel::decay_rate() const {
  switch (kind_) {
    case KernelKind::tension:
    case KernelKind::sobolev1d:
    case KernelKind::matern:
    case KernelKind::gaussian:
      return sigma();
    case KernelKind::compare_k_s:
      return 0.5 * kSqrt3;
    default:
      return 0.0;
  }
}

}  // namespace greenkernel
