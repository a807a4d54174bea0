#include "greenkernel/ldlt.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

#include "greenkernel/errors.hpp"

namespace greenkernel {
namespace {

// Bunch-Kaufman threshold (1 + sqrt(17)) / 8 bounds element growth.
const double kAlpha = (1.0 + std::sqrt(17.0)) / 8.0;

void symmetric_swap(Eigen::MatrixXd& a, Eigen::Index i, Eigen::Index j) {
  if (i == j) return;
  a.row(i).swap(a.row(j));
  a.col(i).swap(a.col(j));
}

}  // namespace

SymmetricIndefiniteLdlt::SymmetricIndefiniteLdlt(const Eigen::MatrixXd& input) {
  if (input.rows() != input.cols()) throw ValidationError("LDL^T factorization needs a square matrix");
  const Eigen::Index n = input.rows();
  Eigen::MatrixXd a = input.selfadjointView<Eigen::Lower>();
  norm1_ = n > 0 ? a.cwiseAbs().colwise().sum().maxCoeff() : 0.0;

  l_ = Eigen::MatrixXd::Identity(n, n);
  diag_ = Eigen::VectorXd::Zero(n);
  offdiag_ = Eigen::VectorXd::Zero(n);
  block_.assign(static_cast<std::size_t>(n), 0);
  perm_.resize(static_cast<std::size_t>(n));
  std::iota(perm_.begin(), perm_.end(), Eigen::Index{0});

  // `a` keeps the full symmetric trailing block a(k:, k:); columns of L
  // computed so far live in l_(:, 0:k) and are row-swapped with it.
  auto swap_rows = [&](Eigen::Index i, Eigen::Index j, Eigen::Index k) {
    if (i == j) return;
    symmetric_swap(a, i, j);
    if (k > 0) l_.block(i, 0, 1, k).swap(l_.block(j, 0, 1, k));
    std::swap(perm_[static_cast<std::size_t>(i)], perm_[static_cast<std::size_t>(j)]);
  };

  Eigen::Index k = 0;
  while (k < n) {
    const double akk = std::abs(a(k, k));
    Eigen::Index r = k;
    double colmax = 0.0;
    if (k + 1 < n) {
      Eigen::Index idx;
      colmax = a.col(k).segment(k + 1, n - k - 1).cwiseAbs().maxCoeff(&idx);
      r = k + 1 + idx;
    }

    int size = 1;
    if (std::max(akk, colmax) == 0.0) {
      singular_ = true;
    } else if (akk < kAlpha * colmax) {
      // Largest off-diagonal magnitude in row/column r of the trailing block.
      double rowmax = 0.0;
      for (Eigen::Index j = k; j < n; ++j) {
        if (j != r) rowmax = std::max(rowmax, std::abs(a(r, j)));
      }
      if (akk * rowmax >= kAlpha * colmax * colmax) {
        // keep the 1x1 pivot at k
      } else if (std::abs(a(r, r)) >= kAlpha * rowmax) {
        swap_rows(k, r, k);
      } else {
        swap_rows(k + 1, r, k);
        size = 2;
      }
    }

    const Eigen::Index rest = n - k - size;
    if (size == 1) {
      const double pivot = a(k, k);
      block_[static_cast<std::size_t>(k)] = 1;
      diag_(k) = pivot;
      if (pivot == 0.0) {
        singular_ = true;
      } else if (rest > 0) {
        const Eigen::VectorXd column = a.col(k).tail(rest);
        l_.col(k).tail(rest) = column / pivot;
        a.bottomRightCorner(rest, rest).noalias() -= column * column.transpose() / pivot;
      }
    } else {
      const double d11 = a(k, k);
      const double d21 = a(k + 1, k);
      const double d22 = a(k + 1, k + 1);
      block_[static_cast<std::size_t>(k)] = 2;
      diag_(k) = d11;
      diag_(k + 1) = d22;
      offdiag_(k) = d21;
      const double det = d11 * d22 - d21 * d21;
      if (det == 0.0) {
        singular_ = true;
      } else if (rest > 0) {
        const Eigen::MatrixXd w = a.block(k + size, k, rest, 2);
        Eigen::Matrix2d dinv;
        dinv << d22, -d21, -d21, d11;
        dinv /= det;
        const Eigen::MatrixXd lw = w * dinv;
        l_.block(k + size, k, rest, 2) = lw;
        a.bottomRightCorner(rest, rest).noalias() -= lw * w.transpose();
      }
    }
    k += size;
  }
}

void SymmetricIndefiniteLdlt::solve_in_place(Eigen::Ref<Eigen::VectorXd> x) const {
  const Eigen::Index n = size();
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) y(i) = x(perm_[static_cast<std::size_t>(i)]);

  l_.triangularView<Eigen::UnitLower>().solveInPlace(y);

  for (Eigen::Index k = 0; k < n;) {
    if (block_[static_cast<std::size_t>(k)] == 1) {
      y(k) /= diag_(k);
      k += 1;
    } else {
      const double d11 = diag_(k);
      const double d21 = offdiag_(k);
      const double d22 = diag_(k + 1);
      const double det = d11 * d22 - d21 * d21;
      const double y1 = y(k);
      const double y2 = y(k + 1);
      y(k) = (d22 * y1 - d21 * y2) / det;
      y(k + 1) = (d11 * y2 - d21 * y1) / det;
      k += 2;
    }
  }

  l_.transpose().triangularView<Eigen::UnitUpper>().solveInPlace(y);
  for (Eigen::Index i = 0; i < n; ++i) x(perm_[static_cast<std::size_t>(i)]) = y(i);
}

Eigen::VectorXd SymmetricIndefiniteLdlt::solve(const Eigen::VectorXd& b) const {
  if (singular_) throw NumericalError("LDL^T solve with an exactly singular matrix");
  if (b.size() != size()) throw ValidationError("right-hand side size does not match the factorization");
  Eigen::VectorXd x = b;
  solve_in_place(x);
  return x;
}

Eigen::MatrixXd SymmetricIndefiniteLdlt::solve(const Eigen::MatrixXd& b) const {
  if (singular_) throw NumericalError("LDL^T solve with an exactly singular matrix");
  if (b.rows() != size()) throw ValidationError("right-hand side size does not match the factorization");
  Eigen::MatrixXd x = b;
  for (Eigen::Index j = 0; j < x.cols(); ++j) solve_in_place(x.col(j));
  return x;
}

double SymmetricIndefiniteLdlt::condition_estimate() const {
  const Eigen::Index n = size();
  if (n == 0) return 1.0;
  if (singular_) return std::numeric_limits<double>::infinity();
  // Hager's method for ||A^{-1}||_1; A is symmetric so A^{-T} = A^{-1}.
  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  double estimate = 0.0;
  Eigen::Index last = -1;
  for (int iter = 0; iter < 5; ++iter) {
    Eigen::VectorXd y = x;
    solve_in_place(y);
    estimate = std::max(estimate, y.lpNorm<1>());
    Eigen::VectorXd z = y.unaryExpr([](double v) { return v >= 0.0 ? 1.0 : -1.0; });
    solve_in_place(z);
    Eigen::Index j;
    const double zmax = z.cwiseAbs().maxCoeff(&j);
    if (zmax <= z.dot(x) || j == last) break;
    x.setZero();
    x(j) = 1.0;
    last = j;
  }
  return estimate * norm1_;
}

SymmetricIndefiniteLdlt::Inertia SymmetricIndefiniteLdlt::inertia() const {
  Inertia in;
  for (Eigen::Index k = 0; k < size();) {
    if (block_[static_cast<std::size_t>(k)] == 1) {
      const double v = diag_(k);
      (v > 0 ? in.positive : v < 0 ? in.negative : in.zero) += 1;
      k += 1;
    } else {
      const double det = diag_(k) * diag_(k + 1) - offdiag_(k) * offdiag_(k);
      if (det < 0) {
        in.positive += 1;
        in.negative += 1;
      } else if (det > 0) {
        ((diag_(k) + diag_(k + 1)) > 0 ? in.positive : in.negative) += 2;
      } else {
        in.zero += 1;
        ((diag_(k) + diag_(k + 1)) > 0 ? in.positive : in.negative) += 1;
      }
      k += 2;
    }
  }
  return in;
}

Eigen::MatrixXd SymmetricIndefiniteLdlt::d() const {
  const Eigen::Index n = size();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out(k, k) = diag_(k);
    if (block_[static_cast<std::size_t>(k)] == 2) {
      out(k + 1, k) = offdiag_(k);
      out(k, k + 1) = offdiag_(k);
    }
  }
  return out;
}

}  // namespace greenkernel
