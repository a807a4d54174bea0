#pragma once

namespace greenkernel::bessel {

// Modified Bessel function of the second kind K_nu(z), z > 0, for the orders
// the kernel catalog needs: integers and half-integers (2*nu integral).
// K_{-nu} = K_nu, so negative orders are accepted.
//
// Half-integer orders use the elementary form sqrt(pi/(2z)) e^{-z} times a
// polynomial in 1/z, built by upward recurrence. Integer orders start from
// K_0, K_1 (power series for z <= 2, trapezoidal rule on the integral
// representation for z > 2) followed by upward recurrence.
double k(double nu, double z);

// z^nu K_nu(z) for nu as above, including the limit at z = 0:
// 2^{nu-1} Gamma(nu) for nu > 0 and +inf for nu <= 0.
double scaled_k(double nu, double z);

}  // namespace greenkernel::bessel
