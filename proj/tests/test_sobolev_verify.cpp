#include <cmath>

#include "doctest.h"
#include "greenkernel/errors.hpp"
#include "greenkernel/interpolation.hpp"
#include "greenkernel/operator_symbols.hpp"
#include "greenkernel/sobolev_verify.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace greenkernel;
using test::column;
using test::make;
using test::vec;

namespace {

InterpolationModel cubic_model() {
  return fit(make("cubic", 1), PolySpace::total_degree(1, 1), {column({0.0, 1.0, 2.0}), vec({0.0, 1.0, 0.0})});
}

}  // namespace

TEST_SUITE("sobolev_verify") {
  TEST_CASE("cubic semi-norm equals the exact spline energy") {
    const auto model = cubic_model();
    const auto rep = hp_seminorm(model, operator_for(model.kernel()));
    // s'' is piecewise linear: int (a + (b - a) t)^2 over a panel of length h is h (a^2 + ab + b^2) / 3.
    const oracle::NaturalSpline spline({0.0, 1.0, 2.0}, {0.0, 1.0, 0.0});
    double exact = 0.0;
    for (double x0 : {0.0, 1.0}) {
      const double a = spline.second_derivative(x0);
      const double b = spline.second_derivative(x0 + 1.0);
      exact += (a * a + a * b + b * b) / 3.0;
    }
    CHECK(rep.gram_value == doctest::Approx(exact).epsilon(1e-12));
    CHECK(rep.quadrature_value == doctest::Approx(exact).epsilon(1e-10));
    CHECK(rep.relative_gap <= 1e-6);
  }

  TEST_CASE("polynomial data has zero semi-norm") {
    const auto model = fit(make("cubic", 1), PolySpace::total_degree(1, 1),
                           {column({0.0, 1.0, 2.0, 3.0}), vec({1.0, 3.0, 5.0, 7.0})});
    const auto rep = hp_seminorm(model, operator_for(model.kernel()));
    CHECK(rep.gram_value <= 1e-14);
    CHECK(rep.quadrature_value <= 1e-14);
  }

  TEST_CASE("exponentially decaying kernels") {
    for (const auto& g : {make("tension", 1, 1.0), make("sobolev1d", 1, 1.0), make("compare_k_s", 1)}) {
      const auto model = fit(g, g.null_space(), {column({0.0, 1.0, 2.0}), vec({0.0, 1.0, 0.0})});
      const auto rep = hp_seminorm(model, operator_for(g));
      CAPTURE(g.name());
      CHECK(rep.relative_gap <= 1e-4);
      CHECK(rep.tail_bound <= 1e-6 * rep.gram_value);
      CHECK(rep.rings >= 1);
    }
  }

  TEST_CASE("Laplacian semi-norm in two dimensions") {
    const auto pts = test::scattered(6, 2, 0.0, 1.0, 0.2, 29);
    Eigen::VectorXd y(6);
    for (int i = 0; i < 6; ++i) y(i) = std::sin(2.0 * pts(i, 0)) * pts(i, 1);
    const auto model = fit(make("laplacian_tps", 2), PolySpace::total_degree(2, 1), {pts, y});
    const auto rep = hp_seminorm(model, operator_for(model.kernel()));
    CHECK(rep.relative_gap <= 1e-4);
  }

  TEST_CASE("x1*x2 has zero Laplacian energy but positive second-derivative energy on boxes") {
    const PolySpace p = PolySpace::total_degree(2, 1).with_monomials({{1, 1}});
    const auto pts = test::points({{0, 0}, {1, 0}, {0, 1}, {1, 1}, {0.5, 0.3}});
    Eigen::VectorXd y(5);
    for (int i = 0; i < 5; ++i) y(i) = pts(i, 0) * pts(i, 1);
    const auto model = fit(make("laplacian_tps", 2), p, {pts, y});
    CHECK(model.c().cwiseAbs().maxCoeff() <= 1e-8);
    QuadSpec box;
    box.box_lo = vec({0.0, 0.0});
    box.box_hi = vec({1.0, 2.0});
    const auto lap = hp_seminorm(model, operator_for(make("laplacian_tps", 2)), box);
    CHECK(lap.quadrature_value <= 1e-14);
    const auto duchon = hp_seminorm(model, operator_for(make("thin_plate", 2)), box);
    // 2 |d^2 q / dx1 dx2|^2 times the box area
    CHECK(duchon.quadrature_value == doctest::Approx(4.0).epsilon(1e-10));
  }

  TEST_CASE("operator application") {
    const auto model = cubic_model();
    const Eigen::VectorXd v = apply_operator(operator_for(model.kernel()), model, vec({0.5}));
    CHECK(v(0) == doctest::Approx(model.derivative(vec({0.5}), {2})));
  }

  TEST_CASE("scaled spaces reweight the order-zero term") {
    const auto model = cubic_model();
    QuadSpec box;
    box.box_lo = vec({-1.0});
    box.box_hi = vec({3.0});
    const auto cmp = compare_scaled_spaces(model, operator_for(make("sobolev1d", 1, 1.0)),
                                           operator_for(make("sobolev1d", 1, 2.0)), box);
    REQUIRE(cmp.order_contributions_a.size() >= 3);
    CHECK(cmp.order_contributions_b[0] / cmp.order_contributions_a[0] == doctest::Approx(16.0).epsilon(1e-12));
    CHECK(cmp.order_contributions_b[1] / cmp.order_contributions_a[1] == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(cmp.order_contributions_b[2] / cmp.order_contributions_a[2] == doctest::Approx(1.0).epsilon(1e-12));

    const auto same = compare_scaled_spaces(model, operator_for(make("sobolev1d", 1, 1.0)),
                                            operator_for(make("sobolev1d", 1, 1.0)), box);
    CHECK(same.ratio == doctest::Approx(1.0).epsilon(1e-12));

    const auto poly = fit(make("cubic", 1), PolySpace::total_degree(1, 1), {column({0.0, 1.0, 2.0}), vec({1.0, 2.0, 3.0})});
    const auto zero = compare_scaled_spaces(poly, operator_for(make("cubic", 1)), operator_for(make("cubic", 1)), box);
    CHECK(std::isnan(zero.ratio));
  }

  TEST_CASE("closed-form operators need a truncation order") {
    const GreenKernel g = make("gaussian", 1, 2.0);
    const auto model = fit(g, g.null_space(), {column({0.0, 0.5, 1.0}), vec({0.0, 1.0, 0.0})});
    CHECK_THROWS_AS(hp_seminorm(model, operator_for(g)), ValidationError);
    QuadSpec spec;
    spec.n_max = 20;
    const auto rep = hp_seminorm(model, operator_for(g), spec);
    REQUIRE(rep.truncation_remainder.has_value());
    CHECK(rep.relative_gap <= 1e-4);
  }

  TEST_CASE("unsupported requests") {
    const auto model = cubic_model();
    // fourth derivatives of the cubic kernel are singular at the centers
    const OperatorVector high(1, 2, {OperatorEntry::differential({{{4}, 1.0}})});
    CHECK_THROWS_AS(hp_seminorm(model, high), ValidationError);
    const GreenKernel g3 = make("polyharmonic", 3, {}, 2);
    const auto pts = test::scattered(6, 3, 0.0, 1.0, 0.2, 5);
    const auto m3 = fit(g3, g3.null_space(), {pts, Eigen::VectorXd::LinSpaced(6, 0.0, 1.0)});
    CHECK_THROWS_AS(hp_seminorm(m3, operator_for(g3)), ValidationError);
  }
}
