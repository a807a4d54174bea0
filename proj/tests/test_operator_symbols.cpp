#include <cmath>
#include <complex>
#include <numbers>

#include "doctest.h"
#include "greenkernel/errors.hpp"
#include "greenkernel/operator_symbols.hpp"
#include "helpers.hpp"

using namespace greenkernel;
using test::make;
using test::vec;

TEST_SUITE("operator_symbols") {
  TEST_CASE("l symbol examples") {
    CHECK(operator_for(make("tension", 1, 1.0)).l_symbol(vec({1.0})) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(operator_for(make("sobolev1d", 1, 1.0)).l_symbol(vec({0.0})) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(operator_for(make("cubic", 1)).l_symbol(vec({0.0})) == 0.0);
    CHECK(operator_for(make("thin_plate", 2)).l_symbol(vec({0.0, 0.0})) == 0.0);
  }

  TEST_CASE("operator symbol matches the catalog symbol") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n(0.0, 1.5);
    for (const auto& g : test::catalog()) {
      if (!g.cpd_guaranteed()) continue;  // no symbol
      const OperatorVector op = operator_for(g);
      CHECK(op.dim() == g.dim());
      for (int t = 0; t < 50; ++t) {
        Eigen::VectorXd w(g.dim());
        for (int i = 0; i < g.dim(); ++i) w(i) = n(rng);
        CAPTURE(g.name());
        CHECK(op.l_symbol(w) == doctest::Approx(g.l_symbol(w)).epsilon(1e-12));
        CHECK(std::exp(op.log_l_symbol(w)) == doctest::Approx(g.l_symbol(w)).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("symbols of real operators satisfy the conjugation rule") {
    for (const auto& g : test::catalog()) {
      const Eigen::VectorXd w = Eigen::VectorXd::LinSpaced(g.dim(), 0.3, 1.9);
      const OperatorVector op = operator_for(g);
      for (const auto& e : op.entries()) {
        const auto plus = e.symbol(w);
        const auto minus = e.symbol(-w);
        CHECK(std::abs(minus - std::conj(plus)) <= 1e-14 * (1.0 + std::abs(plus)));
      }
    }
  }

  TEST_CASE("differential symbol of a single term") {
    const OperatorEntry e = OperatorEntry::differential({{{1, 2}, 3.0}});
    // 3 (i w1)(i w2)^2 = -3i w1 w2^2
    const auto s = e.symbol(vec({2.0, 0.5}));
    CHECK(s.real() == doctest::Approx(0.0));
    CHECK(s.imag() == doctest::Approx(-1.5));
    CHECK(e.order() == 3);
    CHECK(OperatorEntry::closed_form("gaussian_heat", 1.0).order() == -1);
  }

  TEST_CASE("Laplacian powers expand multinomially") {
    const auto terms = laplacian_power(2, 2, 1.0, {0, 0});
    REQUIRE(terms.size() == 3);
    double total = 0.0;
    for (const auto& t : terms) total += t.coeff;
    CHECK(total == doctest::Approx(4.0));
    const OperatorVector op(2, 2, {OperatorEntry::differential(terms)});
    CHECK(op.l_symbol(vec({1.0, 2.0})) == doctest::Approx(625.0));
  }

  TEST_CASE("truncated closed-form operator converges to its symbol") {
    const GreenKernel g = make("gaussian", 1, 1.0);
    const OperatorVector op = operator_for(g);
    CHECK_FALSE(op.is_differential());
    const OperatorVector trunc = op.truncated(20);
    CHECK(trunc.is_differential());
    for (double w : {0.0, 0.5, 1.0, 2.0}) {
      CHECK(trunc.l_symbol(vec({w})) == doctest::Approx(std::exp(w * w / 4.0)).epsilon(1e-12));
    }
  }

  TEST_CASE("order estimates") {
    CHECK(estimate_cpd_order(operator_for(make("cubic", 1))).order == 2);
    CHECK(estimate_cpd_order(operator_for(make("cubic", 1))).slope == doctest::Approx(4.0).epsilon(1e-3));
    CHECK(estimate_cpd_order(operator_for(make("gaussian", 2))).order == 0);
    CHECK(estimate_cpd_order(operator_for(make("polyharmonic", 3, {}, 2))).order == 2);
    CHECK(estimate_cpd_order(operator_for(make("tension", 1, 1.0))).order == 1);
    for (const auto& g : test::catalog()) {
      if (!g.cpd_guaranteed()) continue;
      CAPTURE(g.name());
      CHECK(estimate_cpd_order(operator_for(g)).order == g.cpd_order());
    }
  }

  TEST_CASE("mixed orders are rejected when the sampled radii straddle the crossover") {
    // l = w^2 + w^4 has no single power law on [0.5, 2].
    const OperatorVector op = operator_for(make("tension", 1, 1.0));
    OrderEstimateOptions opts;
    opts.radius_min = 0.5;
    opts.radius_max = 2.0;
    CHECK_THROWS_AS(estimate_cpd_order(op, opts), NumericalError);
  }

  TEST_CASE("hypothesis sampling") {
    const HypothesisReport sob = check_theorem_hypotheses(operator_for(make("sobolev1d", 1, 1.0)));
    CHECK(sob.min_l == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(sob.growth_exponent == doctest::Approx(-4.0).epsilon(1e-3));
    CHECK(sob.origin_slope == doctest::Approx(0.0).epsilon(1e-3).scale(1.0));
    CHECK(sob.positive_on_samples);

    const HypothesisReport cubic = check_theorem_hypotheses(operator_for(make("cubic", 1)));
    CHECK(cubic.positive_on_samples);
    CHECK(cubic.origin_slope == doctest::Approx(4.0).epsilon(1e-3));

    const HypothesisReport tension = check_theorem_hypotheses(operator_for(make("tension", 1, 1.0)));
    CHECK(tension.origin_slope == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(tension.growth_exponent == doctest::Approx(-4.0).epsilon(1e-2));
  }
}
