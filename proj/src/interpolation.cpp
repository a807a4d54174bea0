#include "greenkernel/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <Eigen/QR>

#include "greenkernel/errors.hpp"
#include "greenkernel/ldlt.hpp"
#include "greenkernel/parallel.hpp"

namespace greenkernel {
namespace {

bool same_kernel(const GreenKernel& a, const GreenKernel& b) {
  const auto& x = a.spec();
  const auto& y = b.spec();
  return x.name == y.name && x.dim == y.dim && x.scale == y.scale && x.smoothness == y.smoothness &&
         x.regularization == y.regularization;
}

void check_compatible(const GreenKernel& kernel, const PolySpace& space, const Dataset& data) {
  data.validate();
  if (data.dim() != kernel.dim()) throw ValidationError("data dimension does not match the kernel");
  if (space.dim() != kernel.dim()) throw ValidationError("polynomial space dimension does not match the kernel");
  if (!space.contains_total_degree(kernel.cpd_order() - 1)) {
    std::ostringstream os;
    os << kernel.name() << " is conditionally positive definite of order " << kernel.cpd_order()
       << "; the polynomial space must contain all polynomials of degree < " << kernel.cpd_order();
    throw ValidationError(os.str());
  }
  if (data.size() < space.size()) throw ValidationError("fewer data sites than polynomial basis functions");
  if (space.size() > 0) {
    const auto check = is_unisolvent(space, data.points);
    if (!check.unisolvent) {
      std::ostringstream os;
      os << "data sites are not unisolvent for " << space.describe() << " (Vandermonde condition " << check.condition
         << ")";
      throw ValidationError(os.str());
    }
  }
}

Dataset without(const Dataset& data, Eigen::Index k) {
  const Eigen::Index n = data.size();
  Dataset out;
  out.points.resize(n - 1, data.points.cols());
  out.values.resize(n - 1);
  for (Eigen::Index i = 0, j = 0; i < n; ++i) {
    if (i == k) continue;
    out.points.row(j) = data.points.row(i);
    out.values(j) = data.values(i);
    ++j;
  }
  return out;
}

double rms(const Eigen::VectorXd& e) { return e.size() ? std::sqrt(e.squaredNorm() / static_cast<double>(e.size())) : 0.0; }

}  // namespace

void Dataset::validate() const {
  if (points.rows() != values.size()) throw ValidationError("dataset has different numbers of sites and values");
  if (points.rows() == 0) throw ValidationError("dataset is empty");
  if (!points.allFinite() || !values.allFinite()) throw ValidationError("dataset contains non-finite entries");
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < points.rows(); ++j) {
      if ((points.row(i) - points.row(j)).squaredNorm() == 0.0) {
        std::ostringstream os;
        os << "duplicate data sites at rows " << i << " and " << j;
        throw ValidationError(os.str());
      }
    }
  }
}

Eigen::MatrixXd kernel_matrix(const GreenKernel& kernel, const PointSet& x, const PointSet& y) {
  if (x.cols() != kernel.dim() || y.cols() != kernel.dim()) {
    throw ValidationError("point dimension does not match the kernel");
  }
  Eigen::MatrixXd a(x.rows(), y.rows());
  parallel_for(static_cast<std::size_t>(x.rows()), [&](std::size_t i) {
    const auto row = static_cast<Eigen::Index>(i);
    for (Eigen::Index j = 0; j < y.rows(); ++j) a(row, j) = kernel.radial((x.row(row) - y.row(j)).norm());
  });
  return a;
}

Eigen::MatrixXd kernel_matrix(const GreenKernel& kernel, const PointSet& x) {
  if (x.cols() != kernel.dim()) throw ValidationError("point dimension does not match the kernel");
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd a(n, n);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
    const auto row = static_cast<Eigen::Index>(i);
    for (Eigen::Index j = 0; j <= row; ++j) a(row, j) = kernel.radial((x.row(row) - x.row(j)).norm());
  });
  a.triangularView<Eigen::StrictlyUpper>() = a.transpose();
  return a;
}

Eigen::MatrixXd GramSystem::block() const {
  const Eigen::Index n = a.rows();
  const Eigen::Index q = p.cols();
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n + q, n + q);
  b.topLeftCorner(n, n) = a;
  b.topRightCorner(n, q) = p;
  b.bottomLeftCorner(q, n) = p.transpose();
  return b;
}

GramSystem assemble(const GreenKernel& kernel, const PolySpace& space, const Dataset& data, double ridge) {
  GramSystem sys;
  sys.a = kernel_matrix(kernel, data.points);
  if (ridge != 0.0) sys.a.diagonal().array() += ridge;
  sys.p = space.vandermonde(data.points);
  sys.rhs = Eigen::VectorXd::Zero(data.size() + space.size());
  sys.rhs.head(data.size()) = data.values;
  return sys;
}

InterpolationModel::InterpolationModel(GreenKernel kernel, PolySpace space, PointSet centers, Eigen::VectorXd c,
                                       Eigen::VectorXd beta)
    : kernel_(std::move(kernel)),
      space_(std::move(space)),
      centers_(std::move(centers)),
      c_(std::move(c)),
      beta_(std::move(beta)) {
  if (centers_.cols() != kernel_.dim() || space_.dim() != kernel_.dim()) {
    throw ValidationError("model dimensions are inconsistent");
  }
  if (c_.size() != centers_.rows()) throw ValidationError("model needs one coefficient per center");
  if (beta_.size() != space_.size()) throw ValidationError("model needs one polynomial coefficient per basis element");
}

double InterpolationModel::operator()(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (x.size() != kernel_.dim()) throw ValidationError("point dimension does not match the model");
  double s = 0.0;
  for (Eigen::Index j = 0; j < centers_.rows(); ++j) s += c_(j) * kernel_.radial((x - centers_.row(j).transpose()).norm());
  if (space_.size() > 0) s += beta_.dot(space_.evaluate(x));
  return s;
}

Eigen::VectorXd InterpolationModel::predict(const PointSet& points) const {
  if (points.cols() != kernel_.dim()) throw ValidationError("point dimension does not match the model");
  Eigen::VectorXd out(points.rows());
  parallel_for(static_cast<std::size_t>(points.rows()), [&](std::size_t i) {
    const auto row = static_cast<Eigen::Index>(i);
    out(row) = (*this)(points.row(row).transpose());
  });
  return out;
}

Eigen::VectorXd InterpolationModel::derivatives(const Eigen::Ref<const Eigen::VectorXd>& x,
                                                const std::vector<MultiIndex>& alphas) const {
  Eigen::VectorXd s = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(alphas.size()));
  Eigen::VectorXd shifted(x.size());
  for (Eigen::Index j = 0; j < centers_.rows(); ++j) {
    if (c_(j) == 0.0) continue;
    shifted = x - centers_.row(j).transpose();
    s += c_(j) * kernel_.derivatives(shifted, alphas);
  }
  if (space_.size() > 0) {
    for (std::size_t a = 0; a < alphas.size(); ++a) {
      s(static_cast<Eigen::Index>(a)) += beta_.dot(space_.evaluate_derivative(x, alphas[a]));
    }
  }
  return s;
}

double InterpolationModel::derivative(const Eigen::Ref<const Eigen::VectorXd>& x, const MultiIndex& alpha) const {
  double s = 0.0;
  Eigen::VectorXd shifted(x.size());
  for (Eigen::Index j = 0; j < centers_.rows(); ++j) {
    if (c_(j) == 0.0) continue;
    shifted = x - centers_.row(j).transpose();
    s += c_(j) * kernel_.derivative(shifted, alpha);
  }
  if (space_.size() > 0) s += beta_.dot(space_.evaluate_derivative(x, alpha));
  return s;
}

InterpolationModel fit(const GreenKernel& kernel, const PolySpace& space, const Dataset& data,
                       const FitOptions& options) {
  check_compatible(kernel, space, data);
  const GramSystem sys = assemble(kernel, space, data, options.ridge);
  const SymmetricIndefiniteLdlt ldlt(sys.block());
  if (ldlt.singular()) throw NumericalError("interpolation system is singular");
  const double cond = ldlt.condition_estimate();
  if (!(cond <= options.max_condition)) {
    std::ostringstream os;
    os << "interpolation system is too ill-conditioned: estimated 1-norm condition " << cond << " exceeds "
       << options.max_condition;
    throw NumericalError(os.str());
  }
  const Eigen::VectorXd sol = ldlt.solve(sys.rhs);
  const Eigen::Index n = data.size();
  InterpolationModel model(kernel, space, data.points, sol.head(n), sol.tail(space.size()));
  model.condition_ = cond;

  if (options.ridge == 0.0) {
    const double residual = (model.predict(data.points) - data.values).cwiseAbs().maxCoeff();
    const double bound = options.residual_tolerance * (1.0 + data.values.cwiseAbs().maxCoeff());
    if (!(residual <= bound)) {
      std::ostringstream os;
      os << "interpolation residual " << residual << " exceeds " << bound << " (condition estimate " << cond << ")";
      throw NumericalError(os.str());
    }
  }
  return model;
}

double gram_quadratic_form(const InterpolationModel& model) {
  const Eigen::MatrixXd a = kernel_matrix(model.kernel(), model.centers());
  return model.c().dot(a * model.c());
}

double gram_seminorm(const InterpolationModel& model) {
  const Eigen::MatrixXd a = kernel_matrix(model.kernel(), model.centers());
  const double q = model.c().dot(a * model.c());
  if (q >= 0.0) return std::sqrt(q);
  const double scale = model.c().squaredNorm() * (a.size() ? a.cwiseAbs().maxCoeff() : 0.0);
  if (q >= -1e-12 * scale) return 0.0;
  std::ostringstream os;
  os << "negative native-space quadratic form " << q << " for " << model.kernel().name();
  throw NumericalError(os.str());
}

LoocvResult loocv_error(const GreenKernel& kernel, const PolySpace& space, const Dataset& data) {
  check_compatible(kernel, space, data);
  const Eigen::Index n = data.size();
  if (n < space.size() + 2) throw ValidationError("leave-one-out needs N >= Q + 2");
  for (Eigen::Index k = 0; k < n && space.size() > 0; ++k) {
    if (!is_unisolvent(space, without(data, k).points).unisolvent) {
      throw ValidationError("a leave-one-out subset is not unisolvent");
    }
  }
  const GramSystem sys = assemble(kernel, space, data);
  const SymmetricIndefiniteLdlt ldlt(sys.block());
  if (ldlt.singular()) throw NumericalError("interpolation system is singular");
  const Eigen::VectorXd sol = ldlt.solve(sys.rhs);
  const Eigen::MatrixXd inverse = ldlt.solve(Eigen::MatrixXd(Eigen::MatrixXd::Identity(sys.rhs.size(), sys.rhs.size())));

  LoocvResult out;
  out.errors.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) out.errors(k) = sol(k) / inverse(k, k);
  out.rms = rms(out.errors);
  return out;
}

LoocvResult loocv_error_brute_force(const GreenKernel& kernel, const PolySpace& space, const Dataset& data) {
  check_compatible(kernel, space, data);
  const Eigen::Index n = data.size();
  if (n < space.size() + 2) throw ValidationError("leave-one-out needs N >= Q + 2");
  LoocvResult out;
  out.errors.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const InterpolationModel model = fit(kernel, space, without(data, k));
    out.errors(k) = data.values(k) - model(data.points.row(k).transpose());
  }
  out.rms = rms(out.errors);
  return out;
}

ScaleSweep sweep_scales(const GreenKernel& kernel, const PolySpace& space, const Dataset& data,
                        const std::vector<double>& scales) {
  if (!kernel.scale()) throw ValidationError(kernel.name() + " has no scale parameter to sweep");
  if (scales.empty()) throw ValidationError("scale sweep needs at least one scale");
  ScaleSweep sweep;
  sweep.scales = scales;
  std::sort(sweep.scales.begin(), sweep.scales.end());
  sweep.best_error = std::numeric_limits<double>::infinity();
  for (double s : sweep.scales) {
    double err = std::numeric_limits<double>::infinity();
    try {
      err = loocv_error(kernel.with_scale(s), space, data).rms;
    } catch (const NumericalError&) {
      // unusable scale; reported as inf
    }
    sweep.errors.push_back(err);
    if (err < sweep.best_error) {
      sweep.best_error = err;
      sweep.best_scale = s;
    }
  }
  if (!std::isfinite(sweep.best_error)) throw NumericalError("no scale in the sweep produced a usable fit");
  return sweep;
}

OrthogonalityReport orthogonality_check(const InterpolationModel& small, const InterpolationModel& large,
                                        double tolerance) {
  if (!same_kernel(small.kernel(), large.kernel())) throw ValidationError("models use different kernels");
  if (!(small.space() == large.space())) throw ValidationError("models use different polynomial spaces");

  const PointSet& xl = large.centers();
  Eigen::VectorXd diff = large.c();
  for (Eigen::Index j = 0; j < small.centers().rows(); ++j) {
    Eigen::Index match = -1;
    for (Eigen::Index i = 0; i < xl.rows(); ++i) {
      if (xl.row(i) == small.centers().row(j)) {
        match = i;
        break;
      }
    }
    if (match < 0) throw ValidationError("the larger model's centers do not contain the smaller model's centers");
    diff(match) -= small.c()(j);
  }

  const Eigen::MatrixXd a = kernel_matrix(large.kernel(), xl);
  OrthogonalityReport report;
  report.large_squared = large.c().dot(a * large.c());
  report.small_squared = gram_quadratic_form(small);
  report.difference_squared = diff.dot(a * diff);
  const double rhs = report.small_squared + report.difference_squared;
  const double denom = std::max(std::abs(report.large_squared), std::abs(rhs));
  report.relative_gap = denom > 0.0 ? std::abs(report.large_squared - rhs) / denom : 0.0;
  report.holds = report.relative_gap <= tolerance;
  return report;
}

CpdCheckReport cpd_check(const GreenKernel& kernel, const PolySpace& space, int trials, int max_points,
                         std::uint64_t seed) {
  if (space.dim() != kernel.dim()) throw ValidationError("polynomial space dimension does not match the kernel");
  if (trials < 1) throw ValidationError("cpd_check needs at least one trial");
  const int q = space.size();
  if (max_points < q + 1) throw ValidationError("cpd_check needs more points than polynomial basis functions");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<int> count(q + 1, max_points);
  const int d = kernel.dim();

  CpdCheckReport report;
  report.trials = trials;
  report.max_points = max_points;
  report.min_scaled = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    const int n = count(rng);
    PointSet x(n, d);
    for (int attempt = 0;; ++attempt) {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < d; ++j) x(i, j) = unif(rng);
      }
      if (q == 0 || is_unisolvent(space, x).unisolvent) break;
      if (attempt > 100) throw NumericalError("could not draw a unisolvent point set");
    }
    Eigen::VectorXd c(n);
    for (int i = 0; i < n; ++i) c(i) = normal(rng);
    if (q > 0) {
      const Eigen::MatrixXd p = space.vandermonde(x);
      const Eigen::HouseholderQR<Eigen::MatrixXd> qr(p);
      const Eigen::MatrixXd basis = qr.householderQ() * Eigen::MatrixXd::Identity(n, q);
      c -= basis * (basis.transpose() * c);
    }
    const Eigen::MatrixXd a = kernel_matrix(kernel, x);
    const double value = c.dot(a * c);
    const double scale = c.squaredNorm() * a.cwiseAbs().maxCoeff();
    const double scaled = scale > 0.0 ? value / scale : value;
    report.min_scaled = std::min(report.min_scaled, scaled);
    if (value > 0.0) ++report.strictly_positive;
    if (value > -1e-12 * scale) ++report.within_tolerance;
  }
  report.passed = report.within_tolerance == trials;
  return report;
}

}  // namespace greenkernel
