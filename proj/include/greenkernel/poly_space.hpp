#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "greenkernel/types.hpp"

namespace greenkernel {

// Finite-dimensional space of polynomials spanned by monomials x^alpha.
// total_degree() builds pi_k(R^d) in graded-lexicographic order; with_monomials()
// appends custom generators such as x1*x2.
class PolySpace {
 public:
  PolySpace() = default;
  PolySpace(int dim, std::vector<MultiIndex> exponents);

  // pi_degree(R^dim); degree -1 gives the zero space.
  static PolySpace total_degree(int dim, int degree);
  PolySpace with_monomials(const std::vector<MultiIndex>& extra) const;

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(exponents_.size()); }
  // Maximal total degree of the basis, -1 for the zero space.
  int degree() const;
  const std::vector<MultiIndex>& exponents() const { return exponents_; }

  // True when every monomial of total degree <= degree belongs to the basis.
  bool contains_total_degree(int degree) const;

  Eigen::VectorXd evaluate(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  // D^alpha applied to every basis monomial at x.
  Eigen::VectorXd evaluate_derivative(const Eigen::Ref<const Eigen::VectorXd>& x,
                                      const MultiIndex& alpha) const;
  // N x Q matrix with entry (i, k) = p_k(points.row(i)).
  Eigen::MatrixXd vandermonde(const PointSet& points) const;

  std::string describe() const;

  friend bool operator==(const PolySpace&, const PolySpace&) = default;

 private:
  int dim_ = 1;
  std::vector<MultiIndex> exponents_;
};

// Number of monomials of total degree <= degree in dim variables.
long binomial_dimension(int dim, int degree);

inline constexpr double kUnisolventConditionLimit = 1e12;

struct UnisolventCheck {
  bool unisolvent = false;
  double condition = 0.0;  // 2-norm condition number of the Vandermonde matrix
};

UnisolventCheck is_unisolvent(const PolySpace& space, const PointSet& points);

// Q points xi_k with the Lagrange basis q_k(xi_l) = delta_kl expressed in the
// monomial basis of the space: q_k = sum_j coeffs(j, k) p_j.
class UnisolventSet {
 public:
  UnisolventSet() = default;
  UnisolventSet(PolySpace space, PointSet xi);

  const PolySpace& space() const { return space_; }
  const PointSet& points() const { return xi_; }
  const Eigen::MatrixXd& lagrange_coeffs() const { return coeffs_; }
  int size() const { return static_cast<int>(xi_.rows()); }

  // (q_1(x), ..., q_Q(x))
  Eigen::VectorXd lagrange(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  // Row indices into the candidate set when built by select_unisolvent.
  std::vector<int> source_indices;

 private:
  PolySpace space_;
  PointSet xi_;
  Eigen::MatrixXd coeffs_;
};

// Greedy pivoted elimination on the candidate Vandermonde matrix: at step k
// the candidate with the largest remaining entry in column k is taken (first
// index on ties).
UnisolventSet select_unisolvent(const PolySpace& space, const PointSet& candidates);

}  // namespace greenkernel
