#include <random>

#include <Eigen/LU>

#include "doctest.h"
#include "greenkernel/ldlt.hpp"

using greenkernel::SymmetricIndefiniteLdlt;

namespace {

Eigen::MatrixXd random_symmetric(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = g(rng);
  }
  return a;
}

Eigen::MatrixXd saddle(int n, int q, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n + q, n + q);
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = g(rng);
  b.topLeftCorner(n, n) = m * m.transpose() + Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < q; ++j) b(i, n + j) = b(n + j, i) = g(rng);
  return b;
}

}  // namespace

TEST_SUITE("ldlt") {
  TEST_CASE("solves agree with full-pivot LU") {
    std::mt19937_64 rng(5);
    for (int n : {1, 2, 3, 7, 20, 45}) {
      const Eigen::MatrixXd a = random_symmetric(n, rng);
      const Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(n, -1.0, 2.0);
      const SymmetricIndefiniteLdlt f(a);
      REQUIRE_FALSE(f.singular());
      const Eigen::VectorXd x = f.solve(b);
      const Eigen::VectorXd y = a.fullPivLu().solve(b);
      CHECK((x - y).norm() <= 1e-9 * (1.0 + y.norm()));
      CHECK((a * x - b).norm() <= 1e-11 * (a.norm() * x.norm() + b.norm()));
    }
  }

  TEST_CASE("factorization reproduces the permuted matrix") {
    std::mt19937_64 rng(8);
    const Eigen::MatrixXd a = saddle(9, 3, rng);
    const SymmetricIndefiniteLdlt f(a);
    Eigen::MatrixXd pa(a.rows(), a.cols());
    const auto& p = f.perm();
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index j = 0; j < a.cols(); ++j) pa(i, j) = a(p[i], p[j]);
    const Eigen::MatrixXd rebuilt = f.l() * f.d() * f.l().transpose();
    CHECK((rebuilt - pa).norm() <= 1e-12 * a.norm());
  }

  TEST_CASE("saddle-point inertia and zero diagonal") {
    std::mt19937_64 rng(9);
    for (int q : {1, 3, 6}) {
      const Eigen::MatrixXd b = saddle(12, q, rng);
      const SymmetricIndefiniteLdlt f(b);
      const auto in = f.inertia();
      CHECK(in.positive == 12);
      CHECK(in.negative == q);
      CHECK(in.zero == 0);
      const Eigen::MatrixXd x = f.solve(Eigen::MatrixXd(Eigen::MatrixXd::Identity(b.rows(), b.cols())));
      CHECK((b * x - Eigen::MatrixXd::Identity(b.rows(), b.cols())).norm() <= 1e-10);
    }
    Eigen::MatrixXd swap(2, 2);
    swap << 0, 1, 1, 0;
    const SymmetricIndefiniteLdlt f(swap);
    CHECK_FALSE(f.singular());
    CHECK(f.solve(Eigen::VectorXd(Eigen::Vector2d(3, 4))).isApprox(Eigen::Vector2d(4, 3)));
  }

  TEST_CASE("condition estimate tracks the true 1-norm condition") {
    std::mt19937_64 rng(12);
    for (int n : {4, 10, 30}) {
      const Eigen::MatrixXd a = random_symmetric(n, rng);
      const Eigen::MatrixXd inv = a.inverse();
      const double exact = a.cwiseAbs().colwise().sum().maxCoeff() * inv.cwiseAbs().colwise().sum().maxCoeff();
      const double est = SymmetricIndefiniteLdlt(a).condition_estimate();
      CHECK(est <= exact * (1.0 + 1e-8));
      CHECK(est >= exact / 10.0);
    }
  }

  TEST_CASE("exactly singular matrices are flagged") {
    CHECK(SymmetricIndefiniteLdlt(Eigen::MatrixXd::Zero(3, 3)).singular());
    Eigen::MatrixXd r(2, 2);
    r << 1, 1, 1, 1;
    CHECK(SymmetricIndefiniteLdlt(r).singular());
  }
}
