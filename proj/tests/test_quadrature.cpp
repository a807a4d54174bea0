#include <cmath>

#include "doctest.h"
#include "greenkernel/errors.hpp"
#include "greenkernel/quadrature.hpp"

using namespace greenkernel::quadrature;

TEST_SUITE("quadrature") {
  TEST_CASE("Gauss-Legendre rule") {
    const Rule& r = gauss_legendre15();
    double w = 0.0;
    for (double x : r.weights) w += x;
    CHECK(w == doctest::Approx(2.0).epsilon(1e-15));
    // exact for degree 29
    for (int k = 0; k <= 29; ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i < 15; ++i) s += r.weights[i] * std::pow(r.nodes[i], k);
      const double exact = k % 2 ? 0.0 : 2.0 / (k + 1);
      CHECK(s == doctest::Approx(exact).epsilon(1e-14).scale(1.0));
    }
  }

  TEST_CASE("adaptive 1D integration") {
    auto f = [](double x) {
      Eigen::VectorXd v(2);
      v << std::sqrt(std::abs(x)), std::exp(x);
      return v;
    };
    const Result r = integrate_1d(f, {{-1.0, 0.0}, {0.0, 1.0}}, 2);
    CHECK(r.values(0) == doctest::Approx(4.0 / 3.0).epsilon(1e-11));
    CHECK(r.values(1) == doctest::Approx(std::exp(1.0) - std::exp(-1.0)).epsilon(1e-13));
    CHECK(r.panels >= 2);
  }

  TEST_CASE("adaptive 2D integration") {
    auto f = [](double x, double y) {
      Eigen::VectorXd v(1);
      v << std::log(x * x + y * y + 1e-300) * (x * x + y * y);
      return v;
    };
    // Oracle: iterated 1D integration.
    const Result r = integrate_2d(f, {{0.0, 1.0, 0.0, 1.0}}, 1, {1e-10, 14});
    auto inner = [&](double x) {
      Eigen::VectorXd v(1);
      v(0) = integrate_1d([&](double y) { return f(x, y); }, {{0.0, 1.0}}, 1, {1e-13, 40}).values(0);
      return v;
    };
    const double oracle = integrate_1d(inner, {{0.0, 1.0}}, 1, {1e-12, 40}).values(0);
    CHECK(r.values(0) == doctest::Approx(oracle).epsilon(1e-9));
  }

  TEST_CASE("non-finite integrands are errors") {
    auto f = [](double x) {
      Eigen::VectorXd v(1);
      v(0) = 1.0 / (x - x);
      return v;
    };
    CHECK_THROWS_AS(integrate_1d(f, {{0.0, 1.0}}, 1), greenkernel::NumericalError);
  }
}
