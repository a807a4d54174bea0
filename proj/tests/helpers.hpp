#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "greenkernel/kernel_catalog.hpp"
#include "greenkernel/types.hpp"

namespace test {

inline Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

// Rows given as nested lists.
inline greenkernel::PointSet points(std::initializer_list<std::initializer_list<double>> rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto d = static_cast<Eigen::Index>(rows.begin()->size());
  greenkernel::PointSet p(n, d);
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (double x : r) p(i, j++) = x;
    ++i;
  }
  return p;
}

inline greenkernel::PointSet column(std::initializer_list<double> xs) {
  greenkernel::PointSet p(static_cast<Eigen::Index>(xs.size()), 1);
  Eigen::Index i = 0;
  for (double x : xs) p(i++, 0) = x;
  return p;
}

// Uniform points in [lo, hi]^d at mutual distance >= min_sep.
inline greenkernel::PointSet scattered(int n, int d, double lo, double hi, double min_sep, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  greenkernel::PointSet p(n, d);
  int filled = 0;
  for (long attempt = 0; filled < n; ++attempt) {
    if (attempt > 1000000) throw std::runtime_error("scattered: separation too large for the box");
    for (int j = 0; j < d; ++j) p(filled, j) = u(rng);
    bool ok = true;
    for (int i = 0; i < filled && ok; ++i) ok = (p.row(i) - p.row(filled)).norm() >= min_sep;
    if (ok) ++filled;
  }
  return p;
}

inline greenkernel::GreenKernel make(const std::string& name, int dim, std::optional<double> scale = {},
                                     std::optional<int> smoothness = {}, std::optional<double> reg = {}) {
  greenkernel::KernelSpec s;
  s.name = name;
  s.dim = dim;
  s.scale = scale;
  s.smoothness = smoothness;
  s.regularization = reg;
  return greenkernel::GreenKernel(s);
}

// One instance of every catalog entry.
inline std::vector<greenkernel::GreenKernel> catalog() {
  return {make("cubic", 1),
          make("tension", 1, 2.0),
          make("sobolev1d", 1, 2.0),
          make("compare_k_s", 1),
          make("thin_plate", 2),
          make("laplacian_tps", 2),
          make("polyharmonic", 3, {}, 2),
          make("matern", 2, 2.0, 2),
          make("gaussian", 2, 1.5),
          make("regularized_log_bessel", 2, 1.0, {}, 0.5)};
}

}  // namespace test
