#include "doctest.h"
#include "greenkernel/errors.hpp"
#include "greenkernel/interpolation.hpp"
#include "greenkernel/rkhs_kernel.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace greenkernel;
using test::column;
using test::make;
using test::vec;

TEST_SUITE("rkhs_kernel") {
  TEST_CASE("empty null space gives the kernel itself") {
    const GreenKernel g = make("gaussian", 2, 1.3);
    const RkKernel k = build_rk(g, PolySpace::total_degree(2, -1), test::points({{0, 0}}));
    const auto p = test::scattered(6, 2, -1.0, 1.0, 0.1, 2);
    for (Eigen::Index i = 0; i < p.rows(); ++i)
      for (Eigen::Index j = 0; j < p.rows(); ++j)
        CHECK(k(p.row(i).transpose(), p.row(j).transpose()) == doctest::Approx(g.evaluate((p.row(i) - p.row(j)).transpose())));
  }

  TEST_CASE("cubic reproducing kernel on the unisolvent points") {
    const PolySpace p = PolySpace::total_degree(1, 1);
    const UnisolventSet xi(p, column({0.0, 1.0}));
    const RkKernel k = build_rk(make("cubic", 1), xi, p);
    CHECK(k(vec({0.0}), vec({0.0})) == doctest::Approx(1.0).epsilon(1e-14));
    // K(x, xi_j) = q_j(x)
    for (double x : {-0.5, 0.3, 2.2}) {
      const Eigen::VectorXd q = xi.lagrange(vec({x}));
      CHECK(k(vec({x}), vec({0.0})) == doctest::Approx(q(0)).epsilon(1e-13));
      CHECK(k(vec({x}), vec({1.0})) == doctest::Approx(q(1)).epsilon(1e-13));
    }
  }

  TEST_CASE("symmetry and matrix form") {
    const GreenKernel g = make("thin_plate", 2);
    const auto pts = test::scattered(9, 2, 0.0, 1.0, 0.1, 13);
    const RkKernel k = build_rk(g, PolySpace::total_degree(2, 1), pts);
    const Eigen::MatrixXd gram = k.gram(pts);
    CHECK((gram - gram.transpose()).norm() == 0.0);
    const auto other = test::scattered(4, 2, -1.0, 2.0, 0.1, 14);
    const Eigen::MatrixXd cross = k.cross(pts, other);
    for (Eigen::Index i = 0; i < pts.rows(); ++i)
      for (Eigen::Index j = 0; j < other.rows(); ++j) {
        CHECK(cross(i, j) == doctest::Approx(k(pts.row(i).transpose(), other.row(j).transpose())).epsilon(1e-12));
        CHECK(k(pts.row(i).transpose(), other.row(j).transpose()) ==
              doctest::Approx(k(other.row(j).transpose(), pts.row(i).transpose())).epsilon(1e-13));
      }
  }

  TEST_CASE("equivalence with the augmented interpolant") {
    const PolySpace p = PolySpace::total_degree(1, 1);
    const RkKernel k = build_rk(make("cubic", 1), UnisolventSet(p, column({0.0, 2.0})), p);
    const Dataset d{column({0.0, 1.0, 2.0}), vec({0.0, 1.0, 0.0})};
    const PointSet grid = Eigen::VectorXd::LinSpaced(101, -1.0, 3.0);
    const auto rep = check_equivalence(k, d, grid);
    CHECK(rep.xi_in_data);
    CHECK(rep.max_deviation <= 1e-8);
    const oracle::NaturalSpline spline({0.0, 1.0, 2.0}, {0.0, 1.0, 0.0});
    const auto model = fit(make("cubic", 1), p, d);
    for (Eigen::Index i = 0; i < grid.rows(); ++i) CHECK(model(grid.row(i).transpose()) == doctest::Approx(spline(grid(i, 0))).epsilon(1e-9));

    const auto pts = test::scattered(10, 2, 0.0, 1.0, 0.08, 19);
    Eigen::VectorXd y(10);
    for (int i = 0; i < 10; ++i) y(i) = std::cos(pts(i, 0) + 2.0 * pts(i, 1));
    const RkKernel tps = build_rk(make("thin_plate", 2), PolySpace::total_degree(2, 1), pts);
    const auto rep2 = check_equivalence(tps, {pts, y}, test::scattered(40, 2, -0.2, 1.2, 0.01, 20));
    CHECK(rep2.max_deviation <= 1e-7);
  }

  TEST_CASE("positive definiteness") {
    const RkKernel k = build_rk(make("cubic", 1), PolySpace::total_degree(1, 1), column({0.0, 1.0}));
    const auto one = check_pd(k, 20, 1, 3);
    CHECK(one.all_positive);
    CHECK(one.min > 0.0);
    const auto many = check_pd(k, 100, 8, 4);
    CHECK(many.all_positive);
    CHECK(many.min_eigenvalues.size() == 100);

    PointSet dup = column({0.1, 0.4, 0.4, 0.9});
    const double lam = min_gram_eigenvalue(k, dup);
    CHECK(std::abs(lam) <= 1e-10 * k.gram(dup).cwiseAbs().maxCoeff());
  }

  TEST_CASE("construction errors") {
    const PolySpace p0 = PolySpace::total_degree(1, 0);
    CHECK_THROWS_AS(build_rk(make("cubic", 1), p0, column({0.0, 1.0})), ValidationError);
    const PolySpace p1 = PolySpace::total_degree(1, 1);
    CHECK_THROWS_AS(build_rk(make("cubic", 1), UnisolventSet(p1, column({0.0, 1.0})), PolySpace::total_degree(1, 2)),
                    ValidationError);
    CHECK_THROWS_AS(build_rk(make("thin_plate", 2), p1, column({0.0, 1.0})), ValidationError);
  }
}
