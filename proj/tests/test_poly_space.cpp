#include <algorithm>

#include <Eigen/LU>

#include "doctest.h"
#include "greenkernel/errors.hpp"
#include "greenkernel/poly_space.hpp"
#include "helpers.hpp"

using namespace greenkernel;
using test::column;
using test::points;
using test::vec;

TEST_SUITE("poly_space") {
  TEST_CASE("total-degree spaces") {
    CHECK(PolySpace::total_degree(2, 1).describe() == "span{1, x1, x2}");
    CHECK(PolySpace::total_degree(2, 2).describe() == "span{1, x1, x2, x1^2, x1*x2, x2^2}");
    CHECK(PolySpace::total_degree(3, -1).size() == 0);
    for (int d = 1; d <= 4; ++d) {
      for (int k = 0; k <= 4; ++k) CHECK(PolySpace::total_degree(d, k).size() == binomial_dimension(d, k));
    }
    const PolySpace p = PolySpace::total_degree(2, 1).with_monomials({{1, 1}});
    CHECK(p.contains_total_degree(1));
    CHECK_FALSE(p.contains_total_degree(2));
    CHECK(p.degree() == 2);
    CHECK_THROWS_AS(PolySpace::total_degree(2, 1).with_monomials({{1, 0}}), ValidationError);
  }

  TEST_CASE("evaluation and derivatives") {
    const PolySpace p = PolySpace::total_degree(2, 2);
    const Eigen::VectorXd v = p.evaluate(vec({2.0, 3.0}));
    CHECK(v.isApprox(vec({1, 2, 3, 4, 6, 9})));
    const Eigen::VectorXd dx1 = p.evaluate_derivative(vec({2.0, 3.0}), {1, 0});
    CHECK(dx1.isApprox(vec({0, 1, 0, 4, 3, 0})));
    const Eigen::VectorXd d11 = p.evaluate_derivative(vec({2.0, 3.0}), {1, 1});
    CHECK(d11.isApprox(vec({0, 0, 0, 0, 1, 0})));
  }

  TEST_CASE("unisolvency examples") {
    const PolySpace p1 = PolySpace::total_degree(2, 1);
    CHECK(is_unisolvent(p1, points({{0, 0}, {1, 0}, {0, 1}})).unisolvent);
    CHECK_FALSE(is_unisolvent(p1, points({{0, 0}, {1, 1}, {2, 2}})).unisolvent);
    CHECK_FALSE(is_unisolvent(p1, points({{0, 0}, {1, 1}})).unisolvent);
    const PolySpace q = p1.with_monomials({{1, 1}});
    const auto check = is_unisolvent(q, points({{0, 0}, {1, 0}, {0, 1}, {1, 1}}));
    CHECK(check.unisolvent);
    CHECK(std::abs(q.vandermonde(points({{0, 0}, {1, 0}, {0, 1}, {1, 1}})).determinant()) == doctest::Approx(1.0));
  }

  TEST_CASE("greedy selection examples") {
    const auto s0 = select_unisolvent(PolySpace::total_degree(2, 0), points({{0.3, 0.1}, {5, 5}}));
    CHECK(s0.source_indices == std::vector<int>{0});
    CHECK(s0.lagrange(vec({7.0, -1.0}))(0) == doctest::Approx(1.0));

    const auto s1 = select_unisolvent(PolySpace::total_degree(1, 1), column({0.0, 0.001, 1.0}));
    auto idx = s1.source_indices;
    std::sort(idx.begin(), idx.end());
    CHECK(idx == std::vector<int>{0, 2});

    const auto s2 = select_unisolvent(PolySpace::total_degree(2, 1), points({{0, 0}, {1, 1}, {2, 2}, {0, 1}}));
    CHECK(std::find(s2.source_indices.begin(), s2.source_indices.end(), 3) != s2.source_indices.end());

    CHECK_THROWS_AS(select_unisolvent(PolySpace::total_degree(2, 1), points({{0, 0}, {1, 1}, {2, 2}})),
                    ValidationError);
    CHECK_THROWS_AS(select_unisolvent(PolySpace::total_degree(2, 1), points({{0, 0}, {1, 0}})), ValidationError);
  }

  TEST_CASE("Lagrange property and reproduction") {
    const PolySpace p = PolySpace::total_degree(2, 2);
    const auto cand = test::scattered(15, 2, 0.0, 1.0, 0.05, 21);
    const auto set = select_unisolvent(p, cand);
    for (int k = 0; k < set.size(); ++k) {
      const Eigen::VectorXd q = set.lagrange(set.points().row(k).transpose());
      for (int l = 0; l < set.size(); ++l) CHECK(q(l) == doctest::Approx(k == l ? 1.0 : 0.0).scale(1.0).epsilon(1e-10));
    }
    // sum_k p(xi_k) q_k(x) = p(x) for p in the space
    auto poly = [](const Eigen::VectorXd& x) { return 1.0 - x(0) + 2.0 * x(0) * x(1) + 0.5 * x(1) * x(1); };
    const Eigen::VectorXd x = vec({0.37, -0.8});
    double sum = 0.0;
    const Eigen::VectorXd q = set.lagrange(x);
    for (int k = 0; k < set.size(); ++k) sum += poly(set.points().row(k).transpose()) * q(k);
    CHECK(sum == doctest::Approx(poly(x)).epsilon(1e-10));
  }

  TEST_CASE("unisolvent sets reject degenerate points") {
    CHECK_THROWS_AS(UnisolventSet(PolySpace::total_degree(2, 1), points({{0, 0}, {1, 1}, {2, 2}})), ValidationError);
    CHECK_THROWS_AS(UnisolventSet(PolySpace::total_degree(1, 1), column({0.0})), ValidationError);
  }
}
