#pragma once

// Non-commutative iterated integrals
//
//   E_|[u] = I,   E_{l ∨_x r}[u](t) = ∫_0^t E_l[u](s) u_x(s) E_r[u](s) ds,
//
// evaluated on the signal's grid with a composite trapezoid rule applied as
// a running prefix sum, so each tree costs O(N) once its subtrees are known.

#include <Eigen/Dense>

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <unordered_map>
#include <vector>

#include "dendro/polynomial.hpp"
#include "dendro/signal.hpp"
#include "dendro/tree.hpp"

namespace dendro {

/// A rows x cols matrix per grid node, stored side by side in one dense
/// block so that left multiplication by a coefficient is a single product.
class MatrixPath {
 public:
  MatrixPath() = default;
  MatrixPath(Eigen::Index rows, Eigen::Index cols, std::size_t nodes)
      : cols_(cols),
        data_(Eigen::MatrixXd::Zero(rows, cols * static_cast<Eigen::Index>(nodes))) {}

  Eigen::Index rows() const { return data_.rows(); }
  Eigen::Index cols() const { return cols_; }
  std::size_t nodes() const {
    return cols_ == 0 ? 0 : static_cast<std::size_t>(data_.cols() / cols_);
  }

  auto operator[](std::size_t k) & {
    return data_.middleCols(static_cast<Eigen::Index>(k) * cols_, cols_);
  }
  auto operator[](std::size_t k) const& {
    return data_.middleCols(static_cast<Eigen::Index>(k) * cols_, cols_);
  }
  /// On a temporary path the node value is copied out, not viewed.
  Eigen::MatrixXd operator[](std::size_t k) && { return (*this)[k]; }
  auto back() const& { return (*this)[nodes() - 1]; }
  Eigen::MatrixXd back() && { return (*this)[nodes() - 1]; }

  const Eigen::MatrixXd& data() const { return data_; }
  Eigen::MatrixXd& data() { return data_; }

  MatrixPath& operator+=(const MatrixPath& o) {
    data_ += o.data_;
    return *this;
  }
  MatrixPath& operator-=(const MatrixPath& o) {
    data_ -= o.data_;
    return *this;
  }
  MatrixPath& operator*=(double s) {
    data_ *= s;
    return *this;
  }
  friend MatrixPath operator-(MatrixPath a, const MatrixPath& b) {
    return a -= b;
  }

  /// C * values[k] at every node.
  MatrixPath left_multiplied(const Eigen::Ref<const Eigen::MatrixXd>& c) const {
    MatrixPath out;
    out.cols_ = cols_;
    out.data_ = c * data_;
    return out;
  }

  /// Pointwise product values[k] * other[k].
  MatrixPath pointwise_product(const MatrixPath& other) const;

  /// max_k ||values[k]||_1.
  double max_norm1() const;

 private:
  Eigen::Index cols_ = 0;
  Eigen::MatrixXd data_;
};

struct EvaluationResult {
  Grid grid;
  MatrixPath values;
  /// The evaluated tree; empty for polynomial evaluations.
  std::optional<DecoratedTree> tree;
  int scheme_order = 2;
};

/// Evaluator bound to one signal. With memoization on, every subtree is
/// evaluated once and shared across calls; references returned by
/// evaluate() stay valid for the evaluator's lifetime.
class IteratedIntegrals {
 public:
  explicit IteratedIntegrals(const MatrixSignal& u, bool memoize = true);

  const MatrixPath& evaluate(const DecoratedTree& t);
  MatrixPath evaluate(const RationalPolynomial& p);
  MatrixPath evaluate(const RealPolynomial& p);
  /// Σ c_τ E_τ with c_τ acting by left multiplication.
  MatrixPath evaluate(const MatrixPolynomial& p);

  /// One grafting step: the running integral of E_l u_x E_r.
  MatrixPath graft_integral(const MatrixPath& left, Letter x,
                            const MatrixPath& right) const;

  const MatrixSignal& signal() const { return u_; }
  std::size_t cache_size() const { return cache_.size(); }
  MatrixPath identity_path() const;

 private:
  MatrixPath compute(const DecoratedTree& t);

  const MatrixSignal& u_;
  bool memoize_;
  MatrixPath identity_;
  std::unordered_map<DecoratedTree, MatrixPath, TreeHash> cache_;
  // Holds the latest uncached result so evaluate() can return a reference.
  MatrixPath scratch_;
};

/// Throws AlphabetError if t uses a letter above u.m().
void check_alphabet(const DecoratedTree& t, const MatrixSignal& u);

EvaluationResult evaluate_tree(const DecoratedTree& t, const MatrixSignal& u);
EvaluationResult evaluate_polynomial(const RationalPolynomial& p,
                                     const MatrixSignal& u);
EvaluationResult evaluate_polynomial(const MatrixPolynomial& p,
                                     const MatrixSignal& u);

/// max_k ||E_{t1}(t_k) E_{t2}(t_k) − E_{t1 ≺≻ t2}(t_k)||_1.
double check_product_identity(const DecoratedTree& t1, const DecoratedTree& t2,
                              const MatrixSignal& u);

/// Ū_i(t)^{|τ|} / γ(τ) at every node for a tree whose letters all equal x_i.
std::vector<double> bound_tree_factorial_path(const DecoratedTree& t,
                                              const MatrixSignal& u);
double bound_tree_factorial(const DecoratedTree& t, const MatrixSignal& u);

/// Π_j Ū_j(t)^{n_j} / n_j! at every node, n_j the count of x_j in w;
/// bounds the left comb decorated by w.
std::vector<double> bound_left_comb_path(const Word& w, const MatrixSignal& u);
double bound_left_comb(const Word& w, const MatrixSignal& u);

struct DominationReport {
  /// Per node: ||E_t[u](t_k)||_1 and E_t[ū](t_k).
  std::vector<double> lhs_path;
  std::vector<double> rhs_path;
  double lhs = 0.0;  // max over nodes
  double rhs = 0.0;  // max over nodes

  bool holds(double rel, double abs) const;
};

DominationReport check_ubar_domination(const DecoratedTree& t,
                                       const MatrixSignal& u);

/// |E_{x1^{≺≻n}}[ū](T) − n! E_{left comb x1^n}[ū](T)| with ū taken from
/// channel 1 of u.
double check_factorial_identity(std::size_t n, const MatrixSignal& u);

/// CSV with header t,e11,...; one row per node.
void write_csv(const EvaluationResult& r, std::ostream& out);

}  // namespace dendro
