#include "greenkernel/poly_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "greenkernel/errors.hpp"

namespace greenkernel {
namespace {

// All exponent vectors of total degree exactly `degree`, lexicographically
// descending (x1 varies slowest): x1^2, x1 x2, x2^2, ...
void append_degree(int dim, int degree, std::vector<MultiIndex>& out) {
  MultiIndex current(dim, 0);
  auto recurse = [&](auto&& self, int position, int remaining) -> void {
    if (position == dim - 1) {
      current[position] = remaining;
      out.push_back(current);
      return;
    }
    for (int e = remaining; e >= 0; --e) {
      current[position] = e;
      self(self, position + 1, remaining - e);
    }
  };
  recurse(recurse, 0, degree);
}

double monomial_derivative(const Eigen::Ref<const Eigen::VectorXd>& x, const MultiIndex& exponent,
                           const MultiIndex& alpha) {
  double value = 1.0;
  for (std::size_t i = 0; i < exponent.size(); ++i) {
    const int e = exponent[i];
    const int a = alpha[i];
    if (a > e) return 0.0;
    for (int f = e; f > e - a; --f) value *= f;
    if (e - a > 0) value *= std::pow(x(static_cast<Eigen::Index>(i)), e - a);
  }
  return value;
}

double condition_number(const Eigen::MatrixXd& m) {
  if (m.cols() == 0) return 1.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (smin <= 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

}  // namespace

PolySpace::PolySpace(int dim, std::vector<MultiIndex> exponents)
    : dim_(dim), exponents_(std::move(exponents)) {
  if (dim < 1) throw ValidationError("polynomial space dimension must be >= 1");
  for (const auto& e : exponents_) {
    if (static_cast<int>(e.size()) != dim) {
      throw ValidationError("monomial exponent length does not match the space dimension");
    }
    if (std::any_of(e.begin(), e.end(), [](int v) { return v < 0; })) {
      throw ValidationError("monomial exponents must be nonnegative");
    }
  }
  for (std::size_t i = 0; i < exponents_.size(); ++i) {
    for (std::size_t j = i + 1; j < exponents_.size(); ++j) {
      if (exponents_[i] == exponents_[j]) throw ValidationError("repeated monomial in polynomial space");
    }
  }
}

PolySpace PolySpace::total_degree(int dim, int degree) {
  std::vector<MultiIndex> exponents;
  for (int k = 0; k <= degree; ++k) append_degree(dim, k, exponents);
  return PolySpace(dim, std::move(exponents));
}

PolySpace PolySpace::with_monomials(const std::vector<MultiIndex>& extra) const {
  auto exponents = exponents_;
  exponents.insert(exponents.end(), extra.begin(), extra.end());
  return PolySpace(dim_, std::move(exponents));
}

int PolySpace::degree() const {
  int deg = -1;
  for (const auto& e : exponents_) deg = std::max(deg, order(e));
  return deg;
}

bool PolySpace::contains_total_degree(int degree) const {
  std::vector<MultiIndex> required;
  for (int k = 0; k <= degree; ++k) append_degree(dim_, k, required);
  return std::all_of(required.begin(), required.end(), [&](const MultiIndex& r) {
    return std::find(exponents_.begin(), exponents_.end(), r) != exponents_.end();
  });
}

Eigen::VectorXd PolySpace::evaluate(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  return evaluate_derivative(x, MultiIndex(dim_, 0));
}

Eigen::VectorXd PolySpace::evaluate_derivative(const Eigen::Ref<const Eigen::VectorXd>& x,
                                               const MultiIndex& alpha) const {
  if (x.size() != dim_ || static_cast<int>(alpha.size()) != dim_) {
    throw ValidationError("point dimension does not match the polynomial space");
  }
  Eigen::VectorXd out(size());
  for (int k = 0; k < size(); ++k) out(k) = monomial_derivative(x, exponents_[k], alpha);
  return out;
}

Eigen::MatrixXd PolySpace::vandermonde(const PointSet& points) const {
  if (points.cols() != dim_) throw ValidationError("point dimension does not match the polynomial space");
  Eigen::MatrixXd v(points.rows(), size());
  for (Eigen::Index i = 0; i < points.rows(); ++i) v.row(i) = evaluate(points.row(i).transpose()).transpose();
  return v;
}

std::string PolySpace::describe() const {
  std::ostringstream os;
  os << "span{";
  for (int k = 0; k < size(); ++k) {
    if (k) os << ", ";
    bool constant = true;
    for (int i = 0; i < dim_; ++i) {
      const int e = exponents_[k][i];
      if (e == 0) continue;
      if (!constant) os << '*';
      os << 'x' << (i + 1);
      if (e > 1) os << '^' << e;
      constant = false;
    }
    if (constant) os << '1';
  }
  os << '}';
  return os.str();
}

long binomial_dimension(int dim, int degree) {
  if (degree < 0) return 0;
  // C(degree + dim, dim)
  long result = 1;
  for (int i = 1; i <= dim; ++i) result = result * (degree + i) / i;
  return result;
}

UnisolventCheck is_unisolvent(const PolySpace& space, const PointSet& points) {
  if (space.size() == 0) return {true, 1.0};
  if (points.rows() < space.size()) return {false, std::numeric_limits<double>::infinity()};
  const double cond = condition_number(space.vandermonde(points));
  return {cond <= kUnisolventConditionLimit, cond};
}

UnisolventSet::UnisolventSet(PolySpace space, PointSet xi) : space_(std::move(space)), xi_(std::move(xi)) {
  const int q = space_.size();
  if (xi_.rows() != q) throw ValidationError("a unisolvent set needs exactly Q points");
  if (q == 0) {
    xi_.resize(0, space_.dim());
    coeffs_.resize(0, 0);
    return;
  }
  const Eigen::MatrixXd v = space_.vandermonde(xi_);
  const double cond = condition_number(v);
  if (!(cond <= kUnisolventConditionLimit)) {
    std::ostringstream os;
    os << "points are not unisolvent for " << space_.describe() << " (condition " << cond << ")";
    throw ValidationError(os.str());
  }
  coeffs_ = v.fullPivLu().solve(Eigen::MatrixXd::Identity(q, q));
}

Eigen::VectorXd UnisolventSet::lagrange(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (size() == 0) return Eigen::VectorXd(0);
  return coeffs_.transpose() * space_.evaluate(x);
}

UnisolventSet select_unisolvent(const PolySpace& space, const PointSet& candidates) {
  const int q = space.size();
  if (q == 0) {
    UnisolventSet empty(space, PointSet(0, space.dim()));
    return empty;
  }
  if (candidates.rows() < q) throw ValidationError("fewer candidates than the polynomial space dimension");

  Eigen::MatrixXd work = space.vandermonde(candidates);
  const Eigen::Index n = work.rows();
  std::vector<bool> taken(static_cast<std::size_t>(n), false);
  std::vector<int> chosen;
  chosen.reserve(static_cast<std::size_t>(q));
  const double scale = work.cwiseAbs().maxCoeff();
  for (int k = 0; k < q; ++k) {
    Eigen::Index pivot = -1;
    double best = -1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (taken[static_cast<std::size_t>(i)]) continue;
      const double v = std::abs(work(i, k));
      if (v > best) {
        best = v;
        pivot = i;
      }
    }
    if (pivot < 0 || !(best > 1e-12 * scale)) {
      throw ValidationError("candidates contain no unisolvent subset for " + space.describe());
    }
    taken[static_cast<std::size_t>(pivot)] = true;
    chosen.push_back(static_cast<int>(pivot));
    for (Eigen::Index i = 0; i < n; ++i) {
      if (taken[static_cast<std::size_t>(i)]) continue;
      const double factor = work(i, k) / work(pivot, k);
      work.row(i) -= factor * work.row(pivot);
    }
  }

  PointSet xi(q, space.dim());
  for (int k = 0; k < q; ++k) xi.row(k) = candidates.row(chosen[static_cast<std::size_t>(k)]);
  UnisolventSet set(space, std::move(xi));
  set.source_indices = std::move(chosen);
  return set;
}

}  // namespace greenkernel
