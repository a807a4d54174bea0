#pragma once

#include <vector>

#include <Eigen/Core>

namespace greenkernel {

// Dense symmetric indefinite factorization P A P^T = L D L^T with
// Bunch-Kaufman partial pivoting: D is block diagonal with 1x1 and 2x2
// blocks, L unit lower triangular. Suited to the saddle-point matrices
// [A P; P^T 0] of conditionally positive definite interpolation, whose
// diagonal may vanish.
class SymmetricIndefiniteLdlt {
 public:
  SymmetricIndefiniteLdlt() = default;
  // Only the lower triangle of `a` is read.
  explicit SymmetricIndefiniteLdlt(const Eigen::MatrixXd& a);

  Eigen::Index size() const { return l_.rows(); }
  // True when a pivot block is exactly singular.
  bool singular() const { return singular_; }

  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  Eigen::MatrixXd solve(const Eigen::MatrixXd& b) const;

  // Hager-Higham estimate of the 1-norm condition number.
  double condition_estimate() const;

  // Eigenvalue sign counts of A (Sylvester inertia read off D).
  struct Inertia {
    int positive = 0;
    int negative = 0;
    int zero = 0;
  };
  Inertia inertia() const;

  const Eigen::MatrixXd& l() const { return l_; }
  Eigen::MatrixXd d() const;
  // Row i of P A P^T is row perm()[i] of A.
  const std::vector<Eigen::Index>& perm() const { return perm_; }

 private:
  void solve_in_place(Eigen::Ref<Eigen::VectorXd> x) const;

  Eigen::MatrixXd l_;
  Eigen::VectorXd diag_;     // D(k, k)
  Eigen::VectorXd offdiag_;  // D(k + 1, k) for the first row of a 2x2 block, else 0
  std::vector<int> block_;   // 1 or 2 at the first index of each block, 0 for the second index of a 2x2
  std::vector<Eigen::Index> perm_;
  double norm1_ = 0.0;
  bool singular_ = false;
};

}  // namespace greenkernel
