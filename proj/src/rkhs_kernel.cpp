#include "greenkernel/rkhs_kernel.hpp"

#include <algorithm>
#include <limits>
#include <random>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "greenkernel/errors.hpp"

namespace greenkernel {
namespace {

// Lagrange values q_k(x_i) as an N x Q matrix.
Eigen::MatrixXd lagrange_matrix(const UnisolventSet& xi, const PointSet& x) {
  if (xi.size() == 0) return Eigen::MatrixXd(x.rows(), 0);
  return xi.space().vandermonde(x) * xi.lagrange_coeffs();
}

}  // namespace

RkKernel::RkKernel(GreenKernel phi, UnisolventSet xi_set) : phi_(std::move(phi)), xi_set_(std::move(xi_set)) {
  if (xi_set_.space().dim() != phi_.dim()) throw ValidationError("unisolvent set dimension does not match the kernel");
  phi_xi_ = kernel_matrix(phi_, xi_set_.points());
}

double RkKernel::operator()(const Eigen::Ref<const Eigen::VectorXd>& x,
                            const Eigen::Ref<const Eigen::VectorXd>& y) const {
  double k = phi_.radial((x - y).norm());
  if (xi_set_.size() == 0) return k;
  const Eigen::VectorXd qx = xi_set_.lagrange(x);
  const Eigen::VectorXd qy = xi_set_.lagrange(y);
  const PointSet& xi = xi_set_.points();
  for (int l = 0; l < xi_set_.size(); ++l) {
    k -= qx(l) * phi_.radial((xi.row(l).transpose() - y).norm());
    k -= qy(l) * phi_.radial((x - xi.row(l).transpose()).norm());
  }
  k += qx.dot(phi_xi_ * qy) + qx.dot(qy);
  return k;
}

Eigen::MatrixXd RkKernel::cross(const PointSet& x, const PointSet& y) const {
  Eigen::MatrixXd k = kernel_matrix(phi_, x, y);
  if (xi_set_.size() == 0) return k;
  const Eigen::MatrixXd qx = lagrange_matrix(xi_set_, x);
  const Eigen::MatrixXd qy = lagrange_matrix(xi_set_, y);
  const Eigen::MatrixXd ax = kernel_matrix(phi_, x, xi_set_.points());
  const Eigen::MatrixXd ay = kernel_matrix(phi_, y, xi_set_.points());
  k -= qx * ay.transpose();
  k -= ax * qy.transpose();
  k += qx * (phi_xi_ + Eigen::MatrixXd::Identity(xi_set_.size(), xi_set_.size())) * qy.transpose();
  return k;
}

Eigen::MatrixXd RkKernel::gram(const PointSet& points) const {
  Eigen::MatrixXd k = cross(points, points);
  // Symmetrize away the round-off of the two correction products.
  return 0.5 * (k + k.transpose());
}

RkKernel build_rk(const GreenKernel& phi, const UnisolventSet& xi_set, const PolySpace& space) {
  if (space.dim() != phi.dim()) throw ValidationError("polynomial space dimension does not match the kernel");
  if (!(xi_set.space() == space)) throw ValidationError("unisolvent set was built for a different polynomial space");
  if (!space.contains_total_degree(phi.cpd_order() - 1)) {
    throw ValidationError("the polynomial space must contain the null space of " + phi.name());
  }
  return RkKernel(phi, xi_set);
}

RkKernel build_rk(const GreenKernel& phi, const PolySpace& space, const PointSet& candidates) {
  if (candidates.cols() != phi.dim()) throw ValidationError("candidate dimension does not match the kernel");
  return build_rk(phi, select_unisolvent(space, candidates), space);
}

EquivalenceReport check_equivalence(const RkKernel& rk, const Dataset& data, const PointSet& grid) {
  data.validate();
  if (data.dim() != rk.phi().dim() || grid.cols() != rk.phi().dim()) {
    throw ValidationError("point dimension does not match the kernel");
  }
  const Eigen::MatrixXd a = rk.gram(data.points);
  const Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) throw NumericalError("K-Gram matrix is not numerically positive definite");
  EquivalenceReport report;
  report.k_coefficients = llt.solve(data.values);

  const InterpolationModel model = fit(rk.phi(), rk.space(), data);
  const Eigen::VectorXd k_grid = rk.cross(grid, data.points) * report.k_coefficients;
  const Eigen::VectorXd phi_grid = model.predict(grid);
  report.max_deviation = grid.rows() ? (k_grid - phi_grid).cwiseAbs().maxCoeff() : 0.0;
  report.k_residual = (a * report.k_coefficients - data.values).cwiseAbs().maxCoeff();
  report.phi_residual = (model.predict(data.points) - data.values).cwiseAbs().maxCoeff();

  report.xi_in_data = true;
  const PointSet& xi = rk.xi_set().points();
  for (Eigen::Index k = 0; k < xi.rows(); ++k) {
    bool found = false;
    for (Eigen::Index j = 0; j < data.points.rows() && !found; ++j) found = data.points.row(j) == xi.row(k);
    report.xi_in_data = report.xi_in_data && found;
  }
  return report;
}

double min_gram_eigenvalue(const RkKernel& rk, const PointSet& points) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(rk.gram(points), Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(0);
}

PdReport check_pd(const RkKernel& rk, int trials, int n_points, std::uint64_t seed, double lo, double hi) {
  if (trials < 1 || n_points < 1) throw ValidationError("check_pd needs positive trial and point counts");
  if (!(hi > lo)) throw ValidationError("check_pd needs a nonempty sampling box");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(lo, hi);
  const int d = rk.phi().dim();

  PdReport report;
  report.trials = trials;
  report.n_points = n_points;
  report.all_positive = true;
  report.min_relative = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    PointSet x(n_points, d);
    for (int i = 0; i < n_points; ++i) {
      // Redraw on (measure-zero) coincidences so the points stay distinct.
      for (;;) {
        for (int j = 0; j < d; ++j) x(i, j) = unif(rng);
        bool distinct = true;
        for (int k = 0; k < i && distinct; ++k) distinct = x.row(k) != x.row(i);
        if (distinct) break;
      }
    }
    const Eigen::MatrixXd g = rk.gram(x);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g, Eigen::EigenvaluesOnly);
    const double lambda = eig.eigenvalues()(0);
    const double scale = g.cwiseAbs().maxCoeff();
    report.min_eigenvalues.push_back(lambda);
    report.min_relative = std::min(report.min_relative, scale > 0.0 ? lambda / scale : lambda);
    if (!(lambda > -1e-10 * scale)) report.all_positive = false;
  }
  std::vector<double> sorted = report.min_eigenvalues;
  std::sort(sorted.begin(), sorted.end());
  report.min = sorted.front();
  report.max = sorted.back();
  report.median = sorted[sorted.size() / 2];
  return report;
}

}  // namespace greenkernel
