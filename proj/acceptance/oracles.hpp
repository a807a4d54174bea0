#pragma once

#include <functional>
#include <vector>


namespace greenkernel::oracle {

// Natural cubic spline through (x_i, y_i) from the classical tridiagonal
// system for the second derivatives (M_0 = M_n = 0); linear beyond the
// end knots. Independent of the kernel machinery.
class NaturalSpline {
 public:
  NaturalSpline(std::vector<double> x, std::vector<double> y);
  double operator()(double t) const;
  double second_derivative(double t) const;

 private:
  std::vector<double> x_, y_, m_;
};

// Fourier transform (2 pi)^{-d/2} int G(x) e^{-i omega.x} dx of a radial,
// integrable function G(r) for d = 1 (cosine transform) or d = 2 (Hankel
// transform with J_0), by composite Simpson on [0, r_max].
double radial_fourier_transform(const std::function<double(double)>& g, int dim, double omega, double r_max,
                                int intervals = 200000);

}  // namespace greenkernel::oracle
