#pragma once

// Finite linear combinations of decorated trees.

#include <Eigen/Dense>

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <utility>

#include "dendro/errors.hpp"
#include "dendro/rational.hpp"
#include "dendro/tree.hpp"

namespace dendro {

template <class Coeff>
struct CoeffTraits {
  static bool is_zero(const Coeff& c) { return c == 0; }
  static void check_compatible(const Coeff&, const Coeff&) {}
  static Coeff one() { return Coeff(1); }
};

template <>
struct CoeffTraits<Eigen::MatrixXd> {
  static bool is_zero(const Eigen::MatrixXd& c) {
    return (c.array() == 0.0).all();
  }
  static void check_compatible(const Eigen::MatrixXd& a,
                               const Eigen::MatrixXd& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
      throw ShapeError("matrix coefficients of different shapes");
    }
  }
};

/// Map DecoratedTree -> coefficient with no stored zeros, iterated in the
/// canonical tree order.
template <class Coeff>
class TreePolynomial {
 public:
  using Traits = CoeffTraits<Coeff>;
  using Map = std::map<DecoratedTree, Coeff>;

  TreePolynomial() = default;
  TreePolynomial(const DecoratedTree& t, Coeff c) { add(t, std::move(c)); }

  /// The single tree t with unit coefficient.
  static TreePolynomial monomial(const DecoratedTree& t)
    requires requires { Traits::one(); }
  {
    return TreePolynomial(t, Traits::one());
  }

  void add(const DecoratedTree& t, const Coeff& c) {
    if (!terms_.empty()) Traits::check_compatible(terms_.begin()->second, c);
    auto it = terms_.find(t);
    if (it == terms_.end()) {
      if (!Traits::is_zero(c)) terms_.emplace(t, c);
      return;
    }
    it->second += c;
    if (Traits::is_zero(it->second)) terms_.erase(it);
  }

  TreePolynomial& operator+=(const TreePolynomial& o) {
    for (const auto& [t, c] : o.terms_) add(t, c);
    return *this;
  }
  TreePolynomial& operator-=(const TreePolynomial& o) {
    for (const auto& [t, c] : o.terms_) add(t, Coeff(-c));
    return *this;
  }
  template <class S>
  TreePolynomial& operator*=(const S& s) {
    if (s == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [t, c] : terms_) c = Coeff(c * s);
    return *this;
  }

  friend TreePolynomial operator+(TreePolynomial a, const TreePolynomial& b) {
    return a += b;
  }
  friend TreePolynomial operator-(TreePolynomial a, const TreePolynomial& b) {
    return a -= b;
  }
  friend TreePolynomial operator-(TreePolynomial a) {
    for (auto& [t, c] : a.terms_) c = Coeff(-c);
    return a;
  }
  friend bool operator==(const TreePolynomial& a, const TreePolynomial& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    auto ia = a.terms_.begin();
    for (auto ib = b.terms_.begin(); ib != b.terms_.end(); ++ia, ++ib) {
      if (!(ia->first == ib->first)) return false;
      if (!coeff_equal(ia->second, ib->second)) return false;
    }
    return true;
  }

  /// Coefficient of t, or nullopt when t is not in the support.
  std::optional<Coeff> coefficient(const DecoratedTree& t) const {
    auto it = terms_.find(t);
    if (it == terms_.end()) return std::nullopt;
    return it->second;
  }

  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  auto begin() const { return terms_.begin(); }
  auto end() const { return terms_.end(); }
  const Map& terms() const { return terms_; }

  std::size_t max_order() const {
    std::size_t n = 0;
    for (const auto& [t, c] : terms_) n = std::max(n, t.order());
    return n;
  }
  bool has_leaf() const {
    return !terms_.empty() && terms_.begin()->first.is_leaf();
  }

  /// Terms of order <= n.
  TreePolynomial truncated(std::size_t n) const {
    TreePolynomial out;
    for (const auto& [t, c] : terms_) {
      if (t.order() <= n) out.terms_.emplace(t, c);
    }
    return out;
  }
  /// Terms of order exactly n.
  TreePolynomial homogeneous(std::size_t n) const {
    TreePolynomial out;
    for (const auto& [t, c] : terms_) {
      if (t.order() == n) out.terms_.emplace(t, c);
    }
    return out;
  }

 private:
  static bool coeff_equal(const Coeff& a, const Coeff& b) {
    if constexpr (std::is_same_v<Coeff, Eigen::MatrixXd>) {
      return a.rows() == b.rows() && a.cols() == b.cols() && a == b;
    } else {
      return a == b;
    }
  }

  Map terms_;
};

using RationalPolynomial = TreePolynomial<Rational>;
using RealPolynomial = TreePolynomial<double>;
using MatrixPolynomial = TreePolynomial<Eigen::MatrixXd>;

/// Converts rational coefficients to doubles.
RealPolynomial to_real(const RationalPolynomial& p);

/// Scalar coefficients c become c * I (dim x dim).
MatrixPolynomial to_matrix(const RationalPolynomial& p, Eigen::Index dim);

}  // namespace dendro
