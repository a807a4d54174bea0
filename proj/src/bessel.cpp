#include "greenkernel/bessel.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "greenkernel/errors.hpp"

namespace greenkernel::bessel {
namespace {

constexpr double kEulerGamma = 0.57721566490153286061;

// Power series about 0; accurate to round-off for z <= 2.
void k01_series(double z, double& k0, double& k1) {
  const double q = 0.25 * z * z;
  const double log_half = std::log(0.5 * z);

  // K_0(z) = -(log(z/2) + gamma) I_0(z) + sum_{k>=1} H_k q^k / (k!)^2
  double term = 1.0;  // q^k / (k!)^2
  double harmonic = 0.0;
  double i0 = 1.0;
  double tail0 = 0.0;
  // K_1(z) = 1/z + log(z/2) I_1(z)
  //          - (z/4) sum_{k>=0} (psi(k+1) + psi(k+2)) q^k / (k! (k+1)!)
  double term1 = 1.0;  // q^k / (k! (k+1)!)
  double i1_sum = 1.0;
  double psi_sum = -2.0 * kEulerGamma + 1.0;  // psi(1) + psi(2)
  double tail1 = psi_sum;
  for (int k = 1; k < 40; ++k) {
    term *= q / (static_cast<double>(k) * k);
    harmonic += 1.0 / k;
    i0 += term;
    tail0 += harmonic * term;

    term1 *= q / (static_cast<double>(k) * (k + 1));
    psi_sum += 1.0 / k + 1.0 / (k + 1);
    i1_sum += term1;
    tail1 += psi_sum * term1;
    if (term < 1e-18 * i0 && term1 < 1e-18 * i1_sum) break;
  }
  k0 = -(log_half + kEulerGamma) * i0 + tail0;
  const double i1 = 0.5 * z * i1_sum;
  k1 = 1.0 / z + log_half * i1 - 0.25 * z * tail1;
}

// K_nu(z) = int_0^inf exp(-z cosh t) cosh(nu t) dt. The integrand is
// analytic and doubly-exponentially decaying, so the trapezoidal rule
// converges geometrically in the step size.
double k_integral(double nu, double z) {
  const double h = 0.1;
  // Scale by e^{z} to avoid underflow; z (cosh t - 1) > 745 ends the sum.
  double sum = 0.5;  // t = 0 term, halved
  for (int i = 1; i < 4000; ++i) {
    const double t = i * h;
    const double expo = -z * (std::cosh(t) - 1.0);
    if (expo < -745.0) break;
    sum += std::exp(expo) * std::cosh(nu * t);
  }
  return h * sum * std::exp(-z);
}

void k01(double z, double& k0, double& k1) {
  if (z <= 2.0) {
    k01_series(z, k0, k1);
  } else {
    k0 = k_integral(0.0, z);
    k1 = k_integral(1.0, z);
  }
}

}  // namespace

double k(double nu, double z) {
  if (!(z > 0.0)) throw ValidationError("bessel::k requires z > 0");
  nu = std::abs(nu);
  const double twice = 2.0 * nu;
  if (std::abs(twice - std::round(twice)) > 1e-12) {
    throw ValidationError("bessel::k supports integer and half-integer orders only");
  }
  const int twice_int = static_cast<int>(std::lround(twice));

  double lower;
  double upper;
  double order;
  if (twice_int % 2 == 1) {
    lower = std::sqrt(std::numbers::pi / (2.0 * z)) * std::exp(-z);  // K_{1/2}
    upper = lower * (1.0 + 1.0 / z);                                 // K_{3/2}
    order = 0.5;
  } else {
    k01(z, lower, upper);
    order = 0.0;
  }
  if (nu == order) return lower;
  // K_{v+1} = K_{v-1} + (2v/z) K_v
  double v = order + 1.0;
  while (v < nu - 0.25) {
    const double next = lower + 2.0 * v / z * upper;
    lower = upper;
    upper = next;
    v += 1.0;
  }
  return upper;
}

double scaled_k(double nu, double z) {
  if (z == 0.0) {
    if (nu > 0.0) return std::pow(2.0, nu - 1.0) * std::tgamma(nu);
    return std::numeric_limits<double>::infinity();
  }
  return std::pow(z, nu) * k(nu, z);
}

}  // namespace greenkernel::bessel
