#include "greenkernel/sobolev_verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "greenkernel/errors.hpp"
#include "greenkernel/quadrature.hpp"

namespace greenkernel {
namespace {

int max_order(const OperatorVector& op) {
  int k = 0;
  for (const auto& e : op.entries()) k = std::max(k, e.order());
  return k;
}

// Distinct multi-indices of an operator with the (entry, coefficient) pairs
// that use them, so each derivative of s is evaluated once per point.
class Applicator {
 public:
  explicit Applicator(const OperatorVector& op) : entries_(op.entries().size()) {
    std::map<MultiIndex, std::size_t> index;
    for (std::size_t j = 0; j < op.entries().size(); ++j) {
      for (const auto& t : op.entries()[j].terms) {
        auto [it, inserted] = index.emplace(t.alpha, alphas_.size());
        if (inserted) alphas_.push_back(t.alpha);
        uses_.push_back({j, it->second, t.coeff});
      }
    }
  }

  Eigen::VectorXd operator()(const InterpolationModel& model, const Eigen::Ref<const Eigen::VectorXd>& x) const {
    const Eigen::VectorXd d = model.derivatives(x, alphas_);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(entries_));
    for (const auto& u : uses_) out(static_cast<Eigen::Index>(u.entry)) += u.coeff * d(static_cast<Eigen::Index>(u.alpha));
    return out;
  }

 private:
  struct Use {
    std::size_t entry;
    std::size_t alpha;
    double coeff;
  };
  std::size_t entries_;
  std::vector<MultiIndex> alphas_;
  std::vector<Use> uses_;
};

std::vector<double> unique_sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

// Grid lines: the box edges plus every center coordinate strictly inside.
std::vector<double> grid_lines(const Eigen::VectorXd& coords, double lo, double hi) {
  std::vector<double> lines{lo, hi};
  for (Eigen::Index i = 0; i < coords.size(); ++i) {
    if (coords(i) > lo && coords(i) < hi) lines.push_back(coords(i));
  }
  return unique_sorted(std::move(lines));
}

OperatorVector prepare_operator(const InterpolationModel& model, const OperatorVector& op, const QuadSpec& spec,
                                SeminormReport& report) {
  const int d = model.kernel().dim();
  if (op.dim() != d) throw ValidationError("operator dimension does not match the model");
  if (d > 2) throw ValidationError("semi-norm quadrature supports d = 1 and d = 2 only");
  OperatorVector work = op;
  if (!op.is_differential()) {
    if (!spec.n_max) {
      throw ValidationError("operator has closed-form entries; a truncation order n_max is required for quadrature");
    }
    work = op.truncated(*spec.n_max);
    report.n_max = spec.n_max;
  }
  const OperatorVector own = operator_for(model.kernel());
  if (own.is_differential() && max_order(work) > max_order(own)) {
    std::ostringstream os;
    os << "operator of order " << max_order(work) << " exceeds the smoothness of " << model.kernel().name()
       << " (order " << max_order(own) << ")";
    throw ValidationError(os.str());
  }
  return work;
}

double truncation_remainder(const InterpolationModel& model, const OperatorVector& op, int n_max) {
  double scale = 1.0;
  for (const auto& e : op.entries()) {
    if (e.type == OperatorEntry::Type::closed_form) scale = e.scale;
  }
  const int d = model.kernel().dim();
  const int k = n_max / 2;
  const OperatorVector lap(d, 0, {OperatorEntry::differential(laplacian_power(d, k, 1.0, MultiIndex(d, 0)))});
  const Applicator apply(lap);
  double sup = 0.0;
  for (Eigen::Index j = 0; j < model.centers().rows(); ++j) {
    const double v = apply(model, model.centers().row(j).transpose())(0);
    sup = std::max(sup, v * v);
  }
  const double coeff = std::exp(-(std::lgamma(n_max + 1.0) + n_max * std::log(4.0) + 2.0 * n_max * std::log(scale)));
  return coeff * sup;
}

// Semi-norm mass at the round-off level of the data: (1e-6 max|s(x_j)|)^2
// times the measure of the centers' bounding box. Tails below
// tail_tolerance times this count as converged.
double noise_floor(const InterpolationModel& model) {
  const PointSet& x = model.centers();
  double ymax = 0.0;
  for (Eigen::Index j = 0; j < x.rows(); ++j) ymax = std::max(ymax, std::abs(model(x.row(j).transpose())));
  double measure = 1.0;
  for (Eigen::Index i = 0; i < x.cols(); ++i) {
    const double w = x.col(i).maxCoeff() - x.col(i).minCoeff();
    if (w > 0.0) measure *= w;
  }
  const double r = 1e-6 * ymax;
  return std::max(r * r * measure, 1e-300);
}

struct Accumulator {
  Eigen::VectorXd values;
  double error = 0.0;
  long panels = 0;
  long capped = 0;

  void add(const quadrature::Result& r) {
    values += r.values;
    error += r.error_estimate;
    panels += r.panels;
    capped += r.depth_capped;
  }
  double total() const { return values.sum(); }
};

void integrate_1d(const InterpolationModel& model, const Applicator& apply, int comps, const QuadSpec& spec,
                  SeminormReport& report, Accumulator& acc) {
  auto f = [&](double t) {
    Eigen::VectorXd x(1);
    x(0) = t;
    return apply(model, x).array().square().matrix().eval();
  };
  const Eigen::VectorXd c = model.centers().col(0);
  const GreenKernel& kernel = model.kernel();
  const double noise = noise_floor(model);
  const bool fixed = spec.box_lo.has_value();
  double lo, hi, margin = 0.0;
  if (fixed) {
    lo = (*spec.box_lo)(0);
    hi = (*spec.box_hi)(0);
  } else {
    lo = c.minCoeff();
    hi = c.maxCoeff();
    margin = 0.25 * (hi > lo ? hi - lo : 1.0);
    lo -= margin;
    hi += margin;
  }
  const std::vector<double> lines = grid_lines(c, lo, hi);
  std::vector<quadrature::Interval> panels;
  for (std::size_t i = 0; i + 1 < lines.size(); ++i) panels.push_back({lines[i], lines[i + 1]});

  // Coarse pass to fix the absolute tolerance scale.
  quadrature::Options coarse_opts;
  coarse_opts.max_depth = 0;
  coarse_opts.abs_tol = std::numeric_limits<double>::infinity();
  const double scale = std::max(quadrature::integrate_1d(f, panels, comps, coarse_opts).values.sum(), 1e-300);
  quadrature::Options opts;
  opts.abs_tol = spec.relative_tolerance * scale;
  opts.max_depth = spec.max_depth_1d;
  acc.add(quadrature::integrate_1d(f, panels, comps, opts));

  if (!fixed) {
    const double rate = kernel.decay() == Decay::exponential ? kernel.decay_rate() : 0.0;
    const double cap = rate > 0.0 ? 50.0 / rate : std::numeric_limits<double>::infinity();
    const double step = rate > 0.0 ? std::max(margin, 1.0 / rate) : margin;
    const double mid = 0.5 * (lo + hi);
    double ext = 0.0;
    bool converged = false;
    for (int ring = 0;; ++ring) {
      const double left = lo - ext, right = hi + ext;
      const double b_left = f(left).sum(), b_right = f(right).sum();
      const double tail = rate > 0.0 ? (b_left + b_right) / rate
                                     : b_left * (mid - left) + b_right * (right - mid);
      report.tail_bound = tail;
      report.domain_lo = Eigen::VectorXd::Constant(1, left);
      report.domain_hi = Eigen::VectorXd::Constant(1, right);
      report.rings = ring;
      if (tail <= spec.tail_tolerance * std::max(acc.total(), noise) || ext >= cap) {
        converged = tail <= spec.tail_tolerance * std::max(acc.total(), noise) || rate > 0.0;
        break;
      }
      if (ring >= spec.max_rings) break;
      const double next = std::min(ext + step * std::pow(2.0, ring), cap);
      opts.abs_tol = spec.relative_tolerance * std::max(acc.total(), 1e-300);
      acc.add(quadrature::integrate_1d(f, {{lo - next, lo - ext}, {hi + ext, hi + next}}, comps, opts));
      ext = next;
    }
    if (!converged) {
      std::ostringstream os;
      os << "semi-norm integrand does not decay: tail estimate " << report.tail_bound << " after "
         << report.rings << " box doublings";
      throw NumericalError(os.str());
    }
  } else {
    report.domain_lo = *spec.box_lo;
    report.domain_hi = *spec.box_hi;
  }
}

void integrate_2d(const InterpolationModel& model, const Applicator& apply, int comps, const QuadSpec& spec,
                  SeminormReport& report, Accumulator& acc) {
  auto f = [&](double s, double t) {
    Eigen::VectorXd x(2);
    x << s, t;
    return apply(model, x).array().square().matrix().eval();
  };
  const double noise = noise_floor(model);
  const PointSet& centers = model.centers();
  const GreenKernel& kernel = model.kernel();
  const bool fixed = spec.box_lo.has_value();
  Eigen::Vector2d lo, hi;
  if (fixed) {
    lo = *spec.box_lo;
    hi = *spec.box_hi;
  } else {
    lo = centers.colwise().minCoeff().transpose();
    hi = centers.colwise().maxCoeff().transpose();
    double width = (hi - lo).maxCoeff();
    if (!(width > 0.0)) width = 1.0;
    lo.array() -= 0.25 * width;
    hi.array() += 0.25 * width;
  }
  const std::vector<double> xs = grid_lines(centers.col(0), lo(0), hi(0));
  const std::vector<double> ys = grid_lines(centers.col(1), lo(1), hi(1));
  std::vector<quadrature::Cell> cells;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    for (std::size_t j = 0; j + 1 < ys.size(); ++j) cells.push_back({xs[i], xs[i + 1], ys[j], ys[j + 1]});
  }

  quadrature::Options coarse_opts;
  coarse_opts.max_depth = 0;
  coarse_opts.abs_tol = std::numeric_limits<double>::infinity();
  const double scale = std::max(quadrature::integrate_2d(f, cells, comps, coarse_opts).values.sum(), 1e-300);
  quadrature::Options opts;
  opts.abs_tol = spec.relative_tolerance * scale;
  opts.max_depth = spec.max_depth_2d;
  acc.add(quadrature::integrate_2d(f, cells, comps, opts));

  report.domain_lo = lo;
  report.domain_hi = hi;
  if (fixed) return;

  const double rate = kernel.decay() == Decay::exponential ? kernel.decay_rate() : 0.0;
  const double cap = rate > 0.0 ? 50.0 / rate : std::numeric_limits<double>::infinity();
  const double margin = 0.25 * std::max((hi - lo).maxCoeff() / 1.5, 1e-300);
  const double step = rate > 0.0 ? std::max(margin, 1.0 / rate) : 2.0 * margin;
  const auto& rule = quadrature::gauss_legendre15();
  double ext = 0.0;
  bool converged = false;
  for (int ring = 0;; ++ring) {
    const Eigen::Vector2d blo = lo.array() - ext, bhi = hi.array() + ext;
    // Largest integrand value on the box boundary.
    double b = 0.0;
    for (int side = 0; side < 4; ++side) {
      for (int k = -1; k < 15; ++k) {
        const double u = k < 0 ? -1.0 : rule.nodes[static_cast<std::size_t>(k)];
        const double sx = blo(0) + 0.5 * (u + 1.0) * (bhi(0) - blo(0));
        const double sy = blo(1) + 0.5 * (u + 1.0) * (bhi(1) - blo(1));
        double v = 0.0;
        switch (side) {
          case 0: v = f(sx, blo(1)).sum(); break;
          case 1: v = f(sx, bhi(1)).sum(); break;
          case 2: v = f(blo(0), sy).sum(); break;
          default: v = f(bhi(0), sy).sum(); break;
        }
        b = std::max(b, v);
      }
    }
    const Eigen::Vector2d half = 0.5 * (bhi - blo);
    const double tail = rate > 0.0 ? 4.0 * (half(0) + half(1)) * b / rate
                                   : std::numbers::pi * b * half.squaredNorm();
    report.tail_bound = tail;
    report.domain_lo = blo;
    report.domain_hi = bhi;
    report.rings = ring;
    const bool small = tail <= spec.tail_tolerance * std::max(acc.total(), noise);
    if (small || ext >= cap) {
      converged = small || rate > 0.0;
      break;
    }
    if (ring >= spec.max_rings) break;
    const double next = std::min(ext + step * std::pow(2.0, ring), cap);
    const Eigen::Vector2d nlo = lo.array() - next, nhi = hi.array() + next;
    const std::array<double, 4> bx = {nlo(0), blo(0), bhi(0), nhi(0)};
    const std::array<double, 4> by = {nlo(1), blo(1), bhi(1), nhi(1)};
    std::vector<quadrature::Cell> ring_cells;
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        if (i == 1 && j == 1) continue;
        ring_cells.push_back({bx[i], bx[i + 1], by[j], by[j + 1]});
      }
    }
    opts.abs_tol = spec.relative_tolerance * std::max(acc.total(), 1e-300);
    acc.add(quadrature::integrate_2d(f, ring_cells, comps, opts));
    ext = next;
  }
  if (!converged) {
    std::ostringstream os;
    os << "semi-norm integrand does not decay: tail estimate " << report.tail_bound << " after " << report.rings
       << " box doublings";
    throw NumericalError(os.str());
  }
}

}  // namespace

Eigen::VectorXd apply_operator(const OperatorVector& op, const InterpolationModel& model,
                               const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (op.dim() != model.kernel().dim()) throw ValidationError("operator dimension does not match the model");
  if (!op.is_differential()) throw ValidationError("only differential operator entries can be applied pointwise");
  return Applicator(op)(model, x);
}

SeminormReport hp_seminorm(const InterpolationModel& model, const OperatorVector& op, const QuadSpec& spec) {
  SeminormReport report;
  const OperatorVector work = prepare_operator(model, op, spec, report);
  const int d = model.kernel().dim();
  if (spec.box_lo.has_value() != spec.box_hi.has_value()) throw ValidationError("box needs both corners");
  if (spec.box_lo && (spec.box_lo->size() != d || spec.box_hi->size() != d ||
                      !((*spec.box_hi - *spec.box_lo).array() > 0.0).all())) {
    throw ValidationError("integration box is empty or has the wrong dimension");
  }

  const double g = gram_seminorm(model);
  report.gram_value = g * g;

  const Applicator apply(work);
  const int comps = static_cast<int>(work.entries().size());
  Accumulator acc;
  acc.values = Eigen::VectorXd::Zero(comps);
  if (d == 1) {
    integrate_1d(model, apply, comps, spec, report, acc);
  } else {
    integrate_2d(model, apply, comps, spec, report, acc);
  }
  report.per_operator.assign(acc.values.data(), acc.values.data() + acc.values.size());
  report.quadrature_value = acc.total();
  report.quadrature_error = acc.error;
  report.panels = acc.panels;
  if (spec.n_max) report.truncation_remainder = truncation_remainder(model, op, *spec.n_max);
  const double denom = std::max(std::abs(report.gram_value), std::abs(report.quadrature_value));
  report.relative_gap = denom > 0.0 ? std::abs(report.gram_value - report.quadrature_value) / denom : 0.0;
  return report;
}

ScaledComparison compare_scaled_spaces(const InterpolationModel& model, const OperatorVector& op_a,
                                       const OperatorVector& op_b, const QuadSpec& spec) {
  ScaledComparison out;
  out.a = hp_seminorm(model, op_a, spec);
  out.b = hp_seminorm(model, op_b, spec);
  const double qa = out.a.quadrature_value, qb = out.b.quadrature_value;
  out.ratio = qa == 0.0 && qb == 0.0 ? std::numeric_limits<double>::quiet_NaN() : qb / qa;

  auto group = [&](const OperatorVector& op, const SeminormReport& r) {
    const OperatorVector work = op.is_differential() ? op : op.truncated(*spec.n_max);
    std::vector<double> by_order(static_cast<std::size_t>(max_order(work) + 1), 0.0);
    for (std::size_t j = 0; j < work.entries().size(); ++j) {
      by_order[static_cast<std::size_t>(work.entries()[j].order())] += r.per_operator[j];
    }
    return by_order;
  };
  out.order_contributions_a = group(op_a, out.a);
  out.order_contributions_b = group(op_b, out.b);
  return out;
}

}  // namespace greenkernel
