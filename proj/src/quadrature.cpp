#include "greenkernel/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "greenkernel/errors.hpp"
#include "greenkernel/parallel.hpp"

namespace greenkernel::quadrature {
namespace {

Rule make_rule() {
  Rule rule{};
  constexpr int n = 15;
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[static_cast<std::size_t>(i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

Eigen::VectorXd panel_1d(const Integrand1d& f, double a, double b, int components) {
  const Rule& r = gauss_legendre15();
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(components);
  for (std::size_t i = 0; i < 15; ++i) sum += r.weights[i] * f(mid + half * r.nodes[i]);
  return half * sum;
}

Eigen::VectorXd panel_2d(const Integrand2d& f, const Cell& c, int components) {
  const Rule& r = gauss_legendre15();
  const double hx = 0.5 * (c.x1 - c.x0), mx = 0.5 * (c.x0 + c.x1);
  const double hy = 0.5 * (c.y1 - c.y0), my = 0.5 * (c.y0 + c.y1);
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(components);
  for (std::size_t i = 0; i < 15; ++i) {
    const double x = mx + hx * r.nodes[i];
    for (std::size_t j = 0; j < 15; ++j) sum += (r.weights[i] * r.weights[j]) * f(x, my + hy * r.nodes[j]);
  }
  return (hx * hy) * sum;
}

void check_values(const Eigen::VectorXd& v) {
  if (!v.allFinite()) throw NumericalError("integrand is not finite on a quadrature panel");
}

void adapt_1d(const Integrand1d& f, double a, double b, const Eigen::VectorXd& coarse, double tol, int depth,
              const Options& options, Result& out) {
  const double m = 0.5 * (a + b);
  const Eigen::VectorXd left = panel_1d(f, a, m, static_cast<int>(coarse.size()));
  const Eigen::VectorXd right = panel_1d(f, m, b, static_cast<int>(coarse.size()));
  check_values(left);
  check_values(right);
  const Eigen::VectorXd fine = left + right;
  const double err = (fine - coarse).cwiseAbs().sum();
  if (err <= tol || depth >= options.max_depth) {
    out.values += fine;
    out.error_estimate += err;
    out.panels += 1;
    if (err > tol) out.depth_capped += 1;
    return;
  }
  adapt_1d(f, a, m, left, 0.5 * tol, depth + 1, options, out);
  adapt_1d(f, m, b, right, 0.5 * tol, depth + 1, options, out);
}

void adapt_2d(const Integrand2d& f, const Cell& c, const Eigen::VectorXd& coarse, double tol, int depth,
              const Options& options, Result& out) {
  const double mx = 0.5 * (c.x0 + c.x1), my = 0.5 * (c.y0 + c.y1);
  const std::array<Cell, 4> kids = {Cell{c.x0, mx, c.y0, my}, Cell{mx, c.x1, c.y0, my}, Cell{c.x0, mx, my, c.y1},
                                    Cell{mx, c.x1, my, c.y1}};
  const int comps = static_cast<int>(coarse.size());
  std::array<Eigen::VectorXd, 4> parts;
  Eigen::VectorXd fine = Eigen::VectorXd::Zero(comps);
  for (std::size_t k = 0; k < 4; ++k) {
    parts[k] = panel_2d(f, kids[k], comps);
    check_values(parts[k]);
    fine += parts[k];
  }
  const double err = (fine - coarse).cwiseAbs().sum();
  if (err <= tol || depth >= options.max_depth) {
    out.values += fine;
    out.error_estimate += err;
    out.panels += 1;
    if (err > tol) out.depth_capped += 1;
    return;
  }
  for (std::size_t k = 0; k < 4; ++k) adapt_2d(f, kids[k], parts[k], 0.25 * tol, depth + 1, options, out);
}

Result merge(std::vector<Result>& parts, int components) {
  Result total;
  total.values = Eigen::VectorXd::Zero(components);
  for (const auto& p : parts) {
    total.values += p.values;
    total.error_estimate += p.error_estimate;
    total.panels += p.panels;
    total.depth_capped += p.depth_capped;
  }
  return total;
}

}  // namespace

const Rule& gauss_legendre15() {
  static const Rule rule = make_rule();
  return rule;
}

Result integrate_1d(const Integrand1d& f, const std::vector<Interval>& panels, int components,
                    const Options& options) {
  double measure = 0.0;
  for (const auto& p : panels) measure += std::abs(p.b - p.a);
  std::vector<Result> parts(panels.size());
  parallel_for(panels.size(), [&](std::size_t i) {
    const Interval& p = panels[i];
    Result& r = parts[i];
    r.values = Eigen::VectorXd::Zero(components);
    if (p.b == p.a) return;
    const Eigen::VectorXd coarse = panel_1d(f, p.a, p.b, components);
    check_values(coarse);
    const double tol = measure > 0.0 ? options.abs_tol * std::abs(p.b - p.a) / measure : options.abs_tol;
    adapt_1d(f, p.a, p.b, coarse, tol, 0, options, r);
  });
  return merge(parts, components);
}

Result integrate_2d(const Integrand2d& f, const std::vector<Cell>& cells, int components, const Options& options) {
  double measure = 0.0;
  for (const auto& c : cells) measure += std::abs((c.x1 - c.x0) * (c.y1 - c.y0));
  std::vector<Result> parts(cells.size());
  parallel_for(cells.size(), [&](std::size_t i) {
    const Cell& c = cells[i];
    Result& r = parts[i];
    r.values = Eigen::VectorXd::Zero(components);
    const double area = std::abs((c.x1 - c.x0) * (c.y1 - c.y0));
    if (area == 0.0) return;
    const Eigen::VectorXd coarse = panel_2d(f, c, components);
    check_values(coarse);
    const double tol = measure > 0.0 ? options.abs_tol * area / measure : options.abs_tol;
    adapt_2d(f, c, coarse, tol, 0, options, r);
  });
  return merge(parts, components);
}

}  // namespace greenkernel::quadrature
