#include "acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "greenkernel/errors.hpp"
#include "greenkernel/interpolation.hpp"
#include "greenkernel/kernel_catalog.hpp"
#include "greenkernel/operator_symbols.hpp"
#include "greenkernel/rkhs_kernel.hpp"
#include "greenkernel/sobolev_verify.hpp"
#include "oracles.hpp"

namespace greenkernel::acceptance {
namespace {

using Rng = std::mt19937_64;

KernelSpec spec(const std::string& name, int dim, std::optional<double> scale = {}, std::optional<int> smoothness = {},
                std::optional<double> regularization = {}) {
  return KernelSpec{name, dim, scale, smoothness, regularization};
}

// One parameterization per catalog entry, in catalog order.
std::vector<GreenKernel> catalog() {
  return {
      GreenKernel(spec("cubic", 1)),
      GreenKernel(spec("tension", 1, 2.0)),
      GreenKernel(spec("sobolev1d", 1, 2.0)),
      GreenKernel(spec("compare_k_s", 1)),
      GreenKernel(spec("thin_plate", 2)),
      GreenKernel(spec("laplacian_tps", 2)),
      GreenKernel(spec("polyharmonic", 3, {}, 2)),
      GreenKernel(spec("matern", 2, 2.0, 2)),
      GreenKernel(spec("gaussian", 2, 5.0)),
      GreenKernel(spec("regularized_log_bessel", 2, 1.0, {}, 0.5)),
  };
}

double test_function(const Eigen::VectorXd& x) {
  double v = 0.5 * std::exp(-x.squaredNorm());
  for (Eigen::Index k = 0; k < x.size(); ++k) v += std::sin(2.1 * x(k) + 0.3 * static_cast<double>(k));
  return v;
}

// Uniform sites in [lo, hi]^d, redrawn until every pair is at least
// 0.25 (hi - lo) N^{-1/d} apart; near-coincident sites make any dense solve
// lose the interpolation tolerance.
PointSet random_points(Rng& rng, int n, int d, double lo = 0.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  const double sep = 0.25 * (hi - lo) * std::pow(static_cast<double>(n), -1.0 / d);
  PointSet x(n, d);
  for (int i = 0; i < n; ++i) {
    for (int attempt = 0;; ++attempt) {
      for (int j = 0; j < d; ++j) x(i, j) = u(rng);
      bool ok = true;
      for (int k = 0; k < i && ok; ++k) ok = (x.row(k) - x.row(i)).norm() >= sep;
      if (ok || attempt > 10000) break;
    }
  }
  return x;
}

Dataset sample(const PointSet& x) {
  Dataset data{x, Eigen::VectorXd(x.rows())};
  for (Eigen::Index i = 0; i < x.rows(); ++i) data.values(i) = test_function(x.row(i).transpose());
  return data;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

CriterionResult exactness(std::uint64_t seed) {
  CriterionResult r{1, "interpolation exactness", false, 0.0, 1e-9, 0.0, ""};
  Rng rng(seed);
  std::ostringstream detail;
  for (const auto& kernel : catalog()) {
    const Dataset data = sample(random_points(rng, 40, kernel.dim()));
    const InterpolationModel model = fit(kernel, kernel.null_space(), data);
    const double res = (model.predict(data.points) - data.values).cwiseAbs().maxCoeff();
    const double scaled = res / (1.0 + data.values.cwiseAbs().maxCoeff());
    r.measured = std::max(r.measured, scaled);
    detail << kernel.name() << '=' << sci(scaled) << ' ';
  }
  r.passed = r.measured <= r.threshold;
  r.detail = "N=40 per kernel; " + detail.str();
  return r;
}

CriterionResult cpd_certificates(std::uint64_t seed) {
  CriterionResult r{2, "CPD certificates", true, std::numeric_limits<double>::infinity(), -1e-12, 0.0, ""};
  std::ostringstream detail;
  std::uint64_t k = 0;
  for (const auto& kernel : catalog()) {
    if (!kernel.cpd_guaranteed()) continue;
    const CpdCheckReport rep = cpd_check(kernel, kernel.null_space(), 1000, 20, seed + k++);
    r.measured = std::min(r.measured, rep.min_scaled);
    r.passed = r.passed && rep.passed;
    detail << kernel.name() << ' ' << rep.strictly_positive << "/1000>0 ";
  }
  r.detail = "min c'Ac/(|c|^2 max|A|); " + detail.str();
  return r;
}

CriterionResult natural_spline(std::uint64_t seed) {
  CriterionResult r{3, "cubic equals natural spline", false, 0.0, 1e-8, 0.0, ""};
  Rng rng(seed);
  std::uniform_int_distribution<int> count(4, 12);
  std::normal_distribution<double> normal(0.0, 1.0);
  const GreenKernel cubic(spec("cubic", 1));
  for (int t = 0; t < 5; ++t) {
    const int n = count(rng);
    PointSet x = random_points(rng, n, 1, 0.0, 3.0);
    std::sort(x.data(), x.data() + n);
    Dataset data{x, Eigen::VectorXd(n)};
    for (int i = 0; i < n; ++i) data.values(i) = normal(rng);
    const InterpolationModel model = fit(cubic, PolySpace::total_degree(1, 1), data);
    const oracle::NaturalSpline spline(std::vector<double>(x.data(), x.data() + n),
                                       std::vector<double>(data.values.data(), data.values.data() + n));
    const double lo = x(0, 0) - 1.0, hi = x(n - 1, 0) + 1.0;
    for (int i = 0; i < 200; ++i) {
      const double t_i = lo + (hi - lo) * i / 199.0;
      Eigen::VectorXd p(1);
      p(0) = t_i;
      r.measured = std::max(r.measured, std::abs(model(p) - spline(t_i)));
    }
  }
  r.passed = r.measured <= r.threshold;
  r.detail = "5 datasets, 200-point grids over hull +/- 1";
  return r;
}

CriterionResult seminorm_equality(std::uint64_t seed) {
  CriterionResult r{4, "semi-norm equality gram vs quadrature", true, 0.0, 0.0, 0.0, ""};
  Rng rng(seed);
  struct Item {
    GreenKernel kernel;
    double tol;
  };
  const std::vector<Item> items = {{GreenKernel(spec("cubic", 1)), 1e-6},
                                   {GreenKernel(spec("tension", 1, 2.0)), 1e-4},
                                   {GreenKernel(spec("sobolev1d", 1, 2.0)), 1e-4},
                                   {GreenKernel(spec("thin_plate", 2)), 1e-4}};
  std::ostringstream detail;
  double worst_ratio = 0.0;
  for (const auto& item : items) {
    const int d = item.kernel.dim();
    const Dataset data = sample(random_points(rng, d == 1 ? 10 : 8, d, 0.0, d == 1 ? 3.0 : 1.0));
    const InterpolationModel model = fit(item.kernel, item.kernel.null_space(), data);
    const SeminormReport rep = hp_seminorm(model, operator_for(item.kernel));
    const double allowed = item.tol + rep.tail_bound / std::max(rep.gram_value, 1e-300);
    worst_ratio = std::max(worst_ratio, rep.relative_gap / allowed);
    r.passed = r.passed && rep.relative_gap <= allowed;
    detail << item.kernel.name() << " gap=" << sci(rep.relative_gap) << "(tol " << sci(item.tol) << ") ";
  }
  r.measured = worst_ratio;
  r.threshold = 1.0;
  r.detail = "worst gap/tolerance; " + detail.str();
  return r;
}

CriterionResult symbol_identity(std::uint64_t seed) {
  CriterionResult r{5, "symbol identity", true, 0.0, 1e-12, 0.0, ""};
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> log_radius(std::log(1e-2), std::log(10.0));
  for (const auto& kernel : catalog()) {
    if (!kernel.cpd_guaranteed()) continue;
    const OperatorVector op = operator_for(kernel);
    const double c = std::pow(2.0 * std::numbers::pi, -kernel.dim() / 2.0);
    for (int t = 0; t < 1000; ++t) {
      Eigen::VectorXd w(kernel.dim());
      for (Eigen::Index k = 0; k < w.size(); ++k) w(k) = normal(rng);
      w *= std::exp(log_radius(rng)) / w.norm();
      const double catalog_value = kernel.fourier_symbol(w);
      const double op_value = c / op.l_symbol(w);
      r.measured = std::max(r.measured, std::abs(catalog_value - op_value) / std::abs(op_value));
    }
  }
  const bool identity_ok = r.measured <= r.threshold;

  // Fourier transforms by direct quadrature.
  double ft_worst = 0.0;
  const GreenKernel matern(spec("matern", 1, 1.0, 2));
  const GreenKernel gauss1(spec("gaussian", 1, 1.0));
  const GreenKernel gauss2(spec("gaussian", 2, 1.5));
  for (int i = 1; i <= 10; ++i) {
    const double w = 0.25 * i;
    const struct {
      const GreenKernel* k;
      double r_max;
      int intervals;
    } cases[] = {{&matern, 60.0, 200000}, {&gauss1, 12.0, 20000}, {&gauss2, 8.0, 20000}};
    for (const auto& c : cases) {
      const auto g = [&](double rr) { return c.k->radial(rr); };
      const double quad = oracle::radial_fourier_transform(g, c.k->dim(), w, c.r_max, c.intervals);
      Eigen::VectorXd omega = Eigen::VectorXd::Zero(c.k->dim());
      omega(0) = w;
      const double exact = c.k->fourier_symbol(omega);
      ft_worst = std::max(ft_worst, std::abs(quad - exact) / std::abs(exact));
    }
  }
  r.passed = identity_ok && ft_worst <= 1e-4;
  r.detail = "1000 frequencies per kernel; FT quadrature worst relative " + sci(ft_worst) + " (tol 1e-4)";
  return r;
}

CriterionResult order_recovery(std::uint64_t) {
  CriterionResult r{6, "CPD order recovery", true, 0.0, 0.05, 0.0, ""};
  const std::vector<GreenKernel> kernels = {GreenKernel(spec("cubic", 1)),          GreenKernel(spec("tension", 1, 2.0)),
                                            GreenKernel(spec("thin_plate", 2)),     GreenKernel(spec("polyharmonic", 3, {}, 2)),
                                            GreenKernel(spec("matern", 2, 2.0, 2)), GreenKernel(spec("gaussian", 2, 5.0))};
  std::ostringstream detail;
  for (const auto& kernel : kernels) {
    const OrderEstimate est = estimate_cpd_order(operator_for(kernel));
    const double err = std::abs(est.slope - 2.0 * kernel.cpd_order());
    r.measured = std::max(r.measured, err);
    r.passed = r.passed && err <= r.threshold && est.order == kernel.cpd_order();
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s slope=%.4f ", kernel.name().c_str(), est.slope);
    detail << buf;
  }
  r.detail = detail.str();
  return r;
}

CriterionResult rk_equivalence(std::uint64_t seed) {
  CriterionResult r{7, "RK equivalence and positive definiteness", true, 0.0, 1e-7, 0.0, ""};
  Rng rng(seed);
  std::ostringstream detail;
  for (const auto& kernel : {GreenKernel(spec("cubic", 1)), GreenKernel(spec("thin_plate", 2))}) {
    const int d = kernel.dim();
    const Dataset data = sample(random_points(rng, 10, d));
    const RkKernel rk = build_rk(kernel, kernel.null_space(), data.points);
    PointSet grid;
    if (d == 1) {
      grid.resize(201, 1);
      for (int i = 0; i < 201; ++i) grid(i, 0) = -0.5 + 2.0 * i / 200.0;
    } else {
      grid.resize(441, 2);
      for (int i = 0; i < 21; ++i) {
        for (int j = 0; j < 21; ++j) grid.row(21 * i + j) << -0.25 + 1.5 * i / 20.0, -0.25 + 1.5 * j / 20.0;
      }
    }
    const EquivalenceReport eq = check_equivalence(rk, data, grid);
    const PdReport pd = check_pd(rk, 100, 8, seed + static_cast<std::uint64_t>(d));
    r.measured = std::max(r.measured, eq.max_deviation);
    r.passed = r.passed && eq.max_deviation <= r.threshold && pd.all_positive;
    detail << kernel.name() << " dev=" << sci(eq.max_deviation) << " min_eig=" << sci(pd.min) << ' ';
  }
  r.detail = "100 K-Gram trials each; " + detail.str();
  return r;
}

CriterionResult pythagoras(std::uint64_t seed) {
  CriterionResult r{8, "minimum-norm Pythagoras", false, 0.0, 1e-8, 0.0, ""};
  Rng rng(seed);
  std::uniform_int_distribution<int> extra(1, 5);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::ostringstream detail;
  for (const auto& kernel : catalog()) {
    const PolySpace space = kernel.null_space();
    std::uniform_int_distribution<int> small_count(space.size() + 2, 12);
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
      const int ns = small_count(rng), nl = ns + extra(rng);
      Dataset large = sample(random_points(rng, nl, kernel.dim()));
      for (int i = ns; i < nl; ++i) large.values(i) += normal(rng);
      const Dataset small{large.points.topRows(ns), large.values.head(ns)};
      const auto rep = orthogonality_check(fit(kernel, space, small), fit(kernel, space, large));
      worst = std::max(worst, rep.relative_gap);
    }
    r.measured = std::max(r.measured, worst);
    detail << kernel.name() << '=' << sci(worst) << ' ';
  }
  r.passed = r.measured <= r.threshold;
  r.detail = "10 cases per kernel; " + detail.str();
  return r;
}

CriterionResult modified_tps(std::uint64_t seed) {
  CriterionResult r{9, "modified thin plate spline instance", false, 0.0, 1e-8, 0.0, ""};
  Rng rng(seed);
  const GreenKernel kernel(spec("laplacian_tps", 2));
  const PointSet x = random_points(rng, 12, 2);
  Dataset data{x, Eigen::VectorXd(12)};
  for (int i = 0; i < 12; ++i) data.values(i) = x(i, 0) * x(i, 1);
  const PolySpace extended = PolySpace::total_degree(2, 1).with_monomials({{1, 1}});
  const InterpolationModel with_q = fit(kernel, extended, data);
  const InterpolationModel plain = fit(kernel, PolySpace::total_degree(2, 1), data);
  const double c_inf = with_q.c().cwiseAbs().maxCoeff();
  const double zero_norm = gram_seminorm(with_q);
  const double plain_norm = gram_seminorm(plain);
  r.measured = std::max(c_inf, zero_norm);
  r.passed = c_inf <= 1e-8 && zero_norm <= 1e-8 && plain_norm > 1e-3;
  r.detail = "|c|_inf=" + sci(c_inf) + " seminorm=" + sci(zero_norm) + "; with pi_1 seminorm=" + sci(plain_norm) +
             " (> 1e-3)";
  return r;
}

CriterionResult loocv(std::uint64_t seed) {
  CriterionResult r{10, "LOOCV shortcut equals refits", false, 0.0, 1e-8, 0.0, ""};
  Rng rng(seed);
  const std::vector<std::pair<GreenKernel, int>> problems = {
      {GreenKernel(spec("gaussian", 1, 8.0)), 15},  {GreenKernel(spec("cubic", 1)), 20},
      {GreenKernel(spec("thin_plate", 2)), 25},     {GreenKernel(spec("matern", 2, 2.0, 2)), 30},
      {GreenKernel(spec("tension", 1, 2.0)), 20}};
  std::ostringstream detail;
  for (const auto& [kernel, n] : problems) {
    const Dataset data = sample(random_points(rng, n, kernel.dim()));
    const LoocvResult fast = loocv_error(kernel, kernel.null_space(), data);
    const LoocvResult slow = loocv_error_brute_force(kernel, kernel.null_space(), data);
    const double rel = (fast.errors - slow.errors).cwiseAbs().maxCoeff() / slow.errors.cwiseAbs().maxCoeff();
    r.measured = std::max(r.measured, rel);
    detail << kernel.name() << '=' << sci(rel) << ' ';
  }
  r.passed = r.measured <= r.threshold;
  r.detail = detail.str();
  return r;
}

}  // namespace

std::string format_line(const CriterionResult& r) {
  char head[160];
  std::snprintf(head, sizeof head, "[%s] %2d %-42s metric=%-10.3g threshold=%-8.3g %7.2fs  ", r.passed ? "PASS" : "FAIL",
                r.id, r.name.c_str(), r.measured, r.threshold, r.seconds);
  return head + r.detail;
}

std::vector<CriterionResult> run_all(std::uint64_t seed, bool fail_fast, std::ostream* log) {
  using Fn = std::function<CriterionResult(std::uint64_t)>;
  struct Entry {
    int id;
    const char* name;
    Fn fn;
    double time_limit;  // seconds; 0 for none
  };
  const std::vector<Entry> entries = {
      {1, "interpolation exactness", exactness, 10.0},
      {2, "CPD certificates", cpd_certificates, 30.0},
      {3, "cubic equals natural spline", natural_spline, 0.0},
      {4, "semi-norm equality gram vs quadrature", seminorm_equality, 60.0},
      {5, "symbol identity", symbol_identity, 0.0},
      {6, "CPD order recovery", order_recovery, 0.0},
      {7, "RK equivalence and positive definiteness", rk_equivalence, 0.0},
      {8, "minimum-norm Pythagoras", pythagoras, 0.0},
      {9, "modified thin plate spline instance", modified_tps, 0.0},
      {10, "LOOCV shortcut equals refits", loocv, 0.0},
  };
  std::vector<CriterionResult> results;
  for (const auto& e : entries) {
    const auto start = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = e.fn(seed + static_cast<std::uint64_t>(e.id));
    } catch (const std::exception& ex) {
      r = CriterionResult{e.id, e.name, false, std::numeric_limits<double>::quiet_NaN(), 0.0, 0.0,
                          std::string("error: ") + ex.what()};
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (e.time_limit > 0.0) {
      r.detail += "; time limit " + sci(e.time_limit) + "s";
      if (r.seconds > e.time_limit) r.passed = false;
    }
    if (log) *log << format_line(r) << std::endl;
    results.push_back(r);
    if (fail_fast && !r.passed) break;
  }
  return results;
}

}  // namespace greenkernel::acceptance
