#include "greenkernel/operator_symbols.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "greenkernel/errors.hpp"

namespace greenkernel {
namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

MultiIndex unit(int dim, int axis, int power = 1) {
  MultiIndex a(static_cast<std::size_t>(dim), 0);
  a[static_cast<std::size_t>(axis)] = power;
  return a;
}

std::vector<Eigen::VectorXd> random_directions(int dim, int count, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Eigen::VectorXd> dirs;
  dirs.reserve(static_cast<std::size_t>(count));
  while (static_cast<int>(dirs.size()) < count) {
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) v(i) = normal(gen);
    const double n = v.norm();
    if (n > 1e-8) dirs.push_back(v / n);
  }
  return dirs;
}

std::vector<double> log_spaced(double lo, double hi, int count) {
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    out[static_cast<std::size_t>(i)] = std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)));
  }
  return out;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

// Mean slope of log l^ against log r along each direction.
std::vector<double> direction_slopes(const OperatorVector& op, const std::vector<Eigen::VectorXd>& dirs,
                                     const std::vector<double>& radii) {
  std::vector<double> log_r(radii.size());
  std::transform(radii.begin(), radii.end(), log_r.begin(), [](double r) { return std::log(r); });
  std::vector<double> slopes;
  for (const auto& dir : dirs) {
    std::vector<double> log_l(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) {
      log_l[i] = op.log_l_symbol(radii[i] * dir);
      if (!std::isfinite(log_l[i])) {
        throw NumericalError("no uniform order: symbol is not positive on the sampled frequencies");
      }
    }
    slopes.push_back(least_squares_slope(log_r, log_l));
  }
  return slopes;
}

}  // namespace

OperatorEntry OperatorEntry::differential(std::vector<DifferentialTerm> terms) {
  OperatorEntry e;
  e.type = Type::differential;
  e.terms = std::move(terms);
  return e;
}

OperatorEntry OperatorEntry::closed_form(std::string name, double scale) {
  if (name != "gaussian_heat") throw ValidationError("unknown closed-form operator '" + name + "'");
  if (!(scale > 0.0)) throw ValidationError("closed-form operator scale must be positive");
  OperatorEntry e;
  e.type = Type::closed_form;
  e.name = std::move(name);
  e.scale = scale;
  return e;
}

std::complex<double> OperatorEntry::symbol(const Eigen::Ref<const Eigen::VectorXd>& omega) const {
  if (type == Type::closed_form) {
    return {std::exp(omega.squaredNorm() / (8.0 * scale * scale)), 0.0};
  }
  static const std::complex<double> powers_of_i[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  std::complex<double> sum = 0.0;
  for (const auto& t : terms) {
    double mono = t.coeff;
    for (std::size_t i = 0; i < t.alpha.size(); ++i) mono *= std::pow(omega(static_cast<Eigen::Index>(i)), t.alpha[i]);
    sum += powers_of_i[greenkernel::order(t.alpha) % 4] * mono;
  }
  return sum;
}

double OperatorEntry::log_abs_symbol_squared(const Eigen::Ref<const Eigen::VectorXd>& omega) const {
  if (type == Type::closed_form) return omega.squaredNorm() / (4.0 * scale * scale);
  return std::log(std::norm(symbol(omega)));
}

int OperatorEntry::order() const {
  if (type == Type::closed_form) return -1;
  int k = 0;
  for (const auto& t : terms) k = std::max(k, greenkernel::order(t.alpha));
  return k;
}

OperatorVector::OperatorVector(int dim, int claimed_order, std::vector<OperatorEntry> entries)
    : dim_(dim), claimed_order_(claimed_order), entries_(std::move(entries)) {
  if (dim < 1) throw ValidationError("operator dimension must be >= 1");
  if (claimed_order < 0) throw ValidationError("claimed order must be nonnegative");
  for (const auto& e : entries_) {
    for (const auto& t : e.terms) {
      if (static_cast<int>(t.alpha.size()) != dim) {
        throw ValidationError("operator multi-index length does not match its dimension");
      }
    }
  }
}

bool OperatorVector::is_differential() const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](const OperatorEntry& e) { return e.type == OperatorEntry::Type::differential; });
}

double OperatorVector::l_symbol(const Eigen::Ref<const Eigen::VectorXd>& omega) const {
  if (omega.size() != dim_) throw ValidationError("frequency dimension does not match the operator");
  double sum = 0.0;
  for (const auto& e : entries_) sum += std::norm(e.symbol(omega));
  return sum;
}

double OperatorVector::log_l_symbol(const Eigen::Ref<const Eigen::VectorXd>& omega) const {
  if (omega.size() != dim_) throw ValidationError("frequency dimension does not match the operator");
  std::vector<double> logs;
  logs.reserve(entries_.size());
  for (const auto& e : entries_) logs.push_back(e.log_abs_symbol_squared(omega));
  const double top = logs.empty() ? -std::numeric_limits<double>::infinity() : *std::max_element(logs.begin(), logs.end());
  if (!std::isfinite(top)) return top;
  double sum = 0.0;
  for (double v : logs) sum += std::exp(v - top);
  return top + std::log(sum);
}

OperatorVector OperatorVector::truncated(int n_max) const {
  if (n_max < 0) throw ValidationError("truncation order must be nonnegative");
  std::vector<OperatorEntry> out;
  for (const auto& e : entries_) {
    if (e.type == OperatorEntry::Type::differential) {
      out.push_back(e);
      continue;
    }
    const double s = e.scale;
    for (int n = 0; n <= n_max; ++n) {
      const double coeff = 1.0 / std::sqrt(factorial(n) * std::pow(4.0, n) * std::pow(s, 2.0 * n));
      const int k = n / 2;
      if (n % 2 == 0) {
        out.push_back(OperatorEntry::differential(laplacian_power(dim_, k, coeff, MultiIndex(dim_, 0))));
      } else {
        for (int i = 0; i < dim_; ++i) {
          out.push_back(OperatorEntry::differential(laplacian_power(dim_, k, coeff, unit(dim_, i))));
        }
      }
    }
  }
  return OperatorVector(dim_, claimed_order_, std::move(out));
}

std::vector<DifferentialTerm> laplacian_power(int dim, int k, double coeff, const MultiIndex& extra) {
  // Laplacian^k = sum_{|beta| = k} k!/beta! D^{2 beta}
  std::vector<DifferentialTerm> terms;
  MultiIndex beta(static_cast<std::size_t>(dim), 0);
  auto recurse = [&](auto&& self, int axis, int remaining) -> void {
    if (axis == dim - 1) {
      beta[static_cast<std::size_t>(axis)] = remaining;
      double multinomial = factorial(k);
      MultiIndex alpha(static_cast<std::size_t>(dim));
      for (int i = 0; i < dim; ++i) {
        multinomial /= factorial(beta[static_cast<std::size_t>(i)]);
        alpha[static_cast<std::size_t>(i)] = 2 * beta[static_cast<std::size_t>(i)] + extra[static_cast<std::size_t>(i)];
      }
      terms.push_back({alpha, coeff * multinomial});
      return;
    }
    for (int b = remaining; b >= 0; --b) {
      beta[static_cast<std::size_t>(axis)] = b;
      self(self, axis + 1, remaining - b);
    }
  };
  recurse(recurse, 0, k);
  return terms;
}

OperatorVector operator_for(const GreenKernel& kernel) {
  const int d = kernel.dim();
  const double s = kernel.scale().value_or(1.0);
  using E = OperatorEntry;
  auto single = [&](const MultiIndex& alpha, double coeff) { return E::differential({{alpha, coeff}}); };

  switch (kernel.kind()) {
    case KernelKind::cubic:
      return OperatorVector(1, 2, {single({2}, 1.0)});
    case KernelKind::tension:
      return OperatorVector(1, 1, {single({2}, 1.0), single({1}, s)});
    case KernelKind::sobolev1d:
      return OperatorVector(1, 0, {single({2}, 1.0), single({1}, std::sqrt(2.0) * s), single({0}, s * s)});
    case KernelKind::compare_k_s: {
      const double w = std::pow(3.0, -0.25);
      return OperatorVector(1, 0, {single({2}, w), single({1}, w), single({0}, w)});
    }
    case KernelKind::thin_plate:
      return OperatorVector(2, 2, {single({2, 0}, 1.0), single({1, 1}, std::sqrt(2.0)), single({0, 2}, 1.0)});
    case KernelKind::laplacian_tps:
      return OperatorVector(2, 2, {E::differential(laplacian_power(2, 1, 1.0, {0, 0}))});
    case KernelKind::polyharmonic: {
      const int m = *kernel.smoothness();
      std::vector<E> entries;
      const PolySpace full = PolySpace::total_degree(d, m);
      for (const auto& alpha : full.exponents()) {
        if (order(alpha) != m) continue;
        double multinomial = factorial(m);
        for (int a : alpha) multinomial /= factorial(a);
        entries.push_back(single(alpha, std::sqrt(multinomial)));
      }
      return OperatorVector(d, m, std::move(entries));
    }
    case KernelKind::matern: {
      const int n = *kernel.smoothness();
      std::vector<E> entries;
      for (int j = 0; j <= n; ++j) {
        const double coeff = std::sqrt(factorial(n) * std::pow(s, 2.0 * (n - j)) / (factorial(j) * factorial(n - j)));
        if (j % 2 == 0) {
          entries.push_back(E::differential(laplacian_power(d, j / 2, coeff, MultiIndex(d, 0))));
        } else {
          for (int i = 0; i < d; ++i) entries.push_back(E::differential(laplacian_power(d, j / 2, coeff, unit(d, i))));
        }
      }
      return OperatorVector(d, 0, std::move(entries));
    }
    case KernelKind::gaussian:
      return OperatorVector(d, 0, {E::closed_form("gaussian_heat", s)});
    case KernelKind::regularized_log_bessel:
      return OperatorVector(2, 1,
                            {E::differential(laplacian_power(2, 1, 1.0, {0, 0})), single({1, 0}, s), single({0, 1}, s)});
  }
  throw ValidationError("no operator for kernel " + kernel.name());
}

OrderEstimate estimate_cpd_order(const OperatorVector& op, const OrderEstimateOptions& options) {
  const auto dirs = random_directions(op.dim(), options.directions, options.seed);
  const auto radii = log_spaced(options.radius_min, options.radius_max, options.radii);
  OrderEstimate est;
  est.direction_slopes = direction_slopes(op, dirs, radii);
  est.slope = std::accumulate(est.direction_slopes.begin(), est.direction_slopes.end(), 0.0) /
              static_cast<double>(est.direction_slopes.size());
  est.order = static_cast<int>(std::lround(est.slope / 2.0));
  for (double s : est.direction_slopes) {
    if (std::abs(s - 2.0 * est.order) > options.slope_tolerance) {
      std::ostringstream os;
      os << "no uniform order: direction slope " << s << " is not within " << options.slope_tolerance << " of "
         << 2 * est.order;
      throw NumericalError(os.str());
    }
  }
  return est;
}

HypothesisReport check_theorem_hypotheses(const OperatorVector& op, const HypothesisSampling& sampling) {
  HypothesisReport report;
  const auto dirs = random_directions(op.dim(), sampling.directions, sampling.seed);

  report.min_l = std::numeric_limits<double>::infinity();
  for (double r : log_spaced(sampling.shell_min, sampling.shell_max, sampling.shells)) {
    for (const auto& dir : dirs) {
      const double l = std::exp(op.log_l_symbol(r * dir));
      if (l < report.min_l) {
        report.min_l = l;
        report.min_l_radius = r;
      }
    }
  }
  report.positive_on_samples = report.min_l > 0.0;

  const auto far = log_spaced(sampling.growth_min, sampling.growth_max, sampling.growth_radii);
  std::vector<double> log_r(far.size());
  std::transform(far.begin(), far.end(), log_r.begin(), [](double r) { return std::log(r); });
  double growth = 0.0;
  for (const auto& dir : dirs) {
    std::vector<double> log_inv(far.size());
    for (std::size_t i = 0; i < far.size(); ++i) log_inv[i] = -op.log_l_symbol(far[i] * dir);
    growth += least_squares_slope(log_r, log_inv);
  }
  report.growth_exponent = growth / static_cast<double>(dirs.size());
  report.slowly_increasing = std::isfinite(report.growth_exponent);

  try {
    OrderEstimateOptions opts;
    opts.directions = sampling.directions;
    opts.seed = sampling.seed;
    const auto est = estimate_cpd_order(op, opts);
    report.origin_slope = est.slope;
    report.origin_order = est.order;
    report.uniform_origin_order = true;
  } catch (const NumericalError&) {
    report.uniform_origin_order = false;
    try {
      const auto slopes = direction_slopes(op, dirs, log_spaced(1e-4, 1e-2, 32));
      report.origin_slope = std::accumulate(slopes.begin(), slopes.end(), 0.0) / static_cast<double>(slopes.size());
    } catch (const NumericalError&) {
      report.origin_slope = std::numeric_limits<double>::quiet_NaN();
    }
  }
  report.note =
      "hypotheses checked on sampled frequencies only; a pass means no counterexample was found, not a proof";
  return report;
}

}  // namespace greenkernel
