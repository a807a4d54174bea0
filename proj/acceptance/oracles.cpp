#include "oracles.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace greenkernel::oracle {

NaturalSpline::NaturalSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)), m_(x_.size(), 0.0) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n) throw std::invalid_argument("natural spline needs at least two knots");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(x_[i] > x_[i - 1])) throw std::invalid_argument("natural spline knots must increase");
  }
  if (n == 2) return;
  // Thomas algorithm on the interior unknowns M_1..M_{n-2}.
  const std::size_t k = n - 2;
  std::vector<double> diag(k), upper(k), rhs(k);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
    diag[i - 1] = (h0 + h1) / 3.0;
    upper[i - 1] = h1 / 6.0;
    rhs[i - 1] = (y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0;
  }
  for (std::size_t i = 1; i < k; ++i) {
    const double lower = (x_[i + 1] - x_[i]) / 6.0;
    const double w = lower / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  m_[k] = rhs[k - 1] / diag[k - 1];
  for (std::size_t i = k - 1; i-- > 0;) m_[i + 1] = (rhs[i] - upper[i] * m_[i + 2]) / diag[i];
}

double NaturalSpline::operator()(double t) const {
  const std::size_t n = x_.size();
  if (t <= x_.front() || t >= x_.back()) {
    // Linear extension with the end slope.
    const bool left = t <= x_.front();
    const double h = left ? x_[1] - x_[0] : x_[n - 1] - x_[n - 2];
    const double end_slope = left ? (y_[1] - y_[0]) / h - h * (2.0 * m_[0] + m_[1]) / 6.0
                                  : (y_[n - 1] - y_[n - 2]) / h + h * (m_[n - 2] + 2.0 * m_[n - 1]) / 6.0;
    const double x0 = left ? x_.front() : x_.back();
    const double y0 = left ? y_.front() : y_.back();
    return y0 + end_slope * (t - x0);
  }
  std::size_t i = 0;
  while (t > x_[i + 1]) ++i;
  const double h = x_[i + 1] - x_[i];
  const double a = (x_[i + 1] - t) / h, b = (t - x_[i]) / h;
  return a * y_[i] + b * y_[i + 1] + ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
}

double NaturalSpline::second_derivative(double t) const {
  if (t <= x_.front() || t >= x_.back()) return 0.0;
  std::size_t i = 0;
  while (t > x_[i + 1]) ++i;
  const double h = x_[i + 1] - x_[i];
  return ((x_[i + 1] - t) * m_[i] + (t - x_[i]) * m_[i + 1]) / h;
}

double radial_fourier_transform(const std::function<double(double)>& g, int dim, double omega, double r_max,
                                int intervals) {
  if (intervals % 2 == 1) ++intervals;
  const double h = r_max / intervals;
  auto integrand = [&](double r) {
    if (dim == 1) return 2.0 * g(r) * std::cos(omega * r);
    return g(r) * std::cyl_bessel_j(0.0, omega * r) * r;
  };
  double sum = integrand(0.0) + integrand(r_max);
  for (int i = 1; i < intervals; ++i) sum += (i % 2 ? 4.0 : 2.0) * integrand(i * h);
  const double integral = sum * h / 3.0;
  // d = 1: (2 pi)^{-1/2} int_R; d = 2: (2 pi)^{-1} * 2 pi * Hankel integral.
  return dim == 1 ? integral / std::sqrt(2.0 * std::numbers::pi) : integral;
}

}  // namespace greenkernel::oracle
