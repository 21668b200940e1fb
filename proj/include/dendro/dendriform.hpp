#pragma once

// The free dendriform algebra on an alphabet, realized on decorated planar
// binary trees. Dendriform words are stored as their decorated trees; the
// products below are the tree recursions
//
//   a ≺≻ b = a.l ∨ (a.r ≺≻ b) + (a ≺≻ b.l) ∨ b.r,   | ≺≻ t = t ≺≻ | = t
//   a ≺ b  = a.l ∨ (a.r ≺≻ b)
//   a ≻ b  = (a ≺≻ b.l) ∨ b.r
//
// extended bilinearly to polynomials.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dendro/errors.hpp"
#include "dendro/polynomial.hpp"
#include "dendro/rational.hpp"
#include "dendro/tree.hpp"

namespace dendro {

/// Integer multiplicities produced by products of single trees.
using Multiplicities = TreePolynomial<std::int64_t>;

inline constexpr std::size_t kNoTruncation =
    std::numeric_limits<std::size_t>::max();

/// Tree-level ≺≻ with memoization; terms of order above max_order are
/// dropped, which commutes with the products since they are graded.
class ShuffleEngine {
 public:
  explicit ShuffleEngine(std::size_t max_order = kNoTruncation)
      : max_order_(max_order) {}

  const Multiplicities& shuffle(const DecoratedTree& a, const DecoratedTree& b);
  /// Requires !a.is_leaf().
  Multiplicities prec(const DecoratedTree& a, const DecoratedTree& b);
  /// Requires !b.is_leaf().
  Multiplicities succ(const DecoratedTree& a, const DecoratedTree& b);

  std::size_t max_order() const { return max_order_; }

 private:
  struct PairHash {
    std::size_t operator()(
        const std::pair<DecoratedTree, DecoratedTree>& p) const {
      return p.first.hash() * 31u + p.second.hash();
    }
  };

  std::size_t max_order_;
  std::unordered_map<std::pair<DecoratedTree, DecoratedTree>, Multiplicities,
                     PairHash>
      cache_;
};

namespace detail {

inline Rational coeff_product(const Rational& a, const Rational& b) {
  return a * b;
}
inline double coeff_product(double a, double b) { return a * b; }
inline Eigen::MatrixXd coeff_product(const Rational& a,
                                     const Eigen::MatrixXd& b) {
  return to_double(a) * b;
}
inline Eigen::MatrixXd coeff_product(const Eigen::MatrixXd& a,
                                     const Rational& b) {
  return to_double(b) * a;
}

inline Rational scale(const Rational& c, std::int64_t k) {
  return c * Rational(static_cast<long>(k));
}
inline double scale(double c, std::int64_t k) {
  return c * static_cast<double>(k);
}
inline Eigen::MatrixXd scale(const Eigen::MatrixXd& c, std::int64_t k) {
  return c * static_cast<double>(k);
}

enum class Product { shuffle, prec, succ };

template <class CA, class CB>
auto bilinear(const TreePolynomial<CA>& p, const TreePolynomial<CB>& q,
              Product which, std::size_t max_order) {
  using CR = decltype(coeff_product(std::declval<CA>(), std::declval<CB>()));
  if (which == Product::prec && p.has_leaf()) {
    throw DomainError(
        "≺ is undefined with the empty word as its left operand");
  }
  if (which == Product::succ && q.has_leaf()) {
    throw DomainError(
        "≻ is undefined with the empty word as its right operand");
  }
  ShuffleEngine engine(max_order);
  TreePolynomial<CR> out;
  for (const auto& [a, ca] : p) {
    for (const auto& [b, cb] : q) {
      if (a.order() + b.order() > max_order) continue;
      const CR c = coeff_product(ca, cb);
      auto accumulate = [&](const Multiplicities& m) {
        for (const auto& [t, k] : m) out.add(t, scale(c, k));
      };
      switch (which) {
        case Product::shuffle:
          accumulate(engine.shuffle(a, b));
          break;
        case Product::prec:
          accumulate(engine.prec(a, b));
          break;
        case Product::succ:
          accumulate(engine.succ(a, b));
          break;
      }
    }
  }
  return out;
}

}  // namespace detail

/// Non-commutative shuffle p ≺≻ q. The empty word is the two-sided unit.
template <class CA, class CB>
auto shuffle(const TreePolynomial<CA>& p, const TreePolynomial<CB>& q,
             std::size_t max_order = kNoTruncation) {
  return detail::bilinear(p, q, detail::Product::shuffle, max_order);
}

/// p ≺ q; throws DomainError if p has an empty-word component.
template <class CA, class CB>
auto prec(const TreePolynomial<CA>& p, const TreePolynomial<CB>& q,
          std::size_t max_order = kNoTruncation) {
  return detail::bilinear(p, q, detail::Product::prec, max_order);
}

/// p ≻ q; throws DomainError if q has an empty-word component.
template <class CA, class CB>
auto succ(const TreePolynomial<CA>& p, const TreePolynomial<CB>& q,
          std::size_t max_order = kNoTruncation) {
  return detail::bilinear(p, q, detail::Product::succ, max_order);
}

/// Bilinear combinations of ≺ and ≻ that can serve as the ▷ product of the
/// Magnus recursion.
enum class PreLieForm {
  /// a ▷ b = a ≺ b − a ≻ b (the combination that yields
  /// E_{x▷x}[U](t) = ∫ [U(s), ∫_0^s U] ds).
  prec_minus_succ,
  /// a ▷ b = a ≻ b − a ≺ b.
  succ_minus_prec,
  /// a ▷ b = a ≻ b − b ≺ a. Evaluates to ∫ [E_a, dE_b], so iterating
  /// d ▷ (.) realizes ad_Ω.
  succ_minus_swapped_prec,
};

std::string_view to_string(PreLieForm form);
PreLieForm parse_pre_lie_form(std::string_view name);

template <class C>
TreePolynomial<C> pre_lie(const TreePolynomial<C>& p,
                          const TreePolynomial<C>& q,
                          PreLieForm form = PreLieForm::prec_minus_succ,
                          std::size_t max_order = kNoTruncation) {
  switch (form) {
    case PreLieForm::prec_minus_succ:
      return prec(p, q, max_order) - succ(p, q, max_order);
    case PreLieForm::succ_minus_prec:
      return succ(p, q, max_order) - prec(p, q, max_order);
    case PreLieForm::succ_minus_swapped_prec:
      return succ(p, q, max_order) - prec(q, p, max_order);
  }
  return {};
}

/// Bilinear grafting p ∨_x q.
template <class C>
TreePolynomial<C> graft(const TreePolynomial<C>& p, Letter x,
                        const TreePolynomial<C>& q) {
  TreePolynomial<C> out;
  for (const auto& [a, ca] : p) {
    for (const auto& [b, cb] : q) {
      out.add(graft(a, x, b), detail::coeff_product(ca, cb));
    }
  }
  return out;
}

/// p^{≺≻ n} with p^{≺≻ 0} = |.
RationalPolynomial shuffle_power(const RationalPolynomial& p, std::size_t n,
                                 std::size_t max_order = kNoTruncation);

/// Sum of all order-n trees decorated by x^n, unit coefficients.
RationalPolynomial char_trees(std::size_t n, Letter x,
                              std::size_t cap = kDefaultEnumerationCap);

/// Sum of all order-n planar trees decorated with every word in X^n.
RationalPolynomial all_decorated_trees(std::size_t n, const Alphabet& alphabet,
                                       std::size_t cap = kDefaultEnumerationCap);

// ---------------------------------------------------------------------------
// Parenthesis words over X ∪ {⌊, ⌋}, written with '[' and ']'.

struct ParenToken {
  enum class Kind { letter, open, close };
  Kind kind;
  Letter x{};

  friend bool operator==(const ParenToken&, const ParenToken&) = default;
};

/// Validated parenthesis word; the empty word is allowed.
class ParenthesisWord {
 public:
  const std::vector<ParenToken>& tokens() const { return tokens_; }
  bool empty() const { return tokens_.empty(); }

 private:
  friend ParenthesisWord parse_parenthesis_word(std::string_view);
  friend ParenthesisWord to_parenthesis_word(const DecoratedTree&);
  std::vector<ParenToken> tokens_;
};

/// Rejection of a parenthesis word; condition() is 1..5 for the violated
/// balance condition (i)..(v), 0 for an unknown token.
class ParenthesisWordError : public ParseError {
 public:
  ParenthesisWordError(int condition, const std::string& what)
      : ParseError(what), condition_(condition) {}
  int condition() const { return condition_; }

 private:
  int condition_;
};

/// Checks, in order: (i) prefix bracket counts nonnegative and balanced,
/// (ii) no two adjacent letters, (iii) no "[]" or "][", (iv) the word is not
/// wrapped by one bracket pair, (v) every bracket level has one of the forms
/// x, x[w], [w]x, [w]x[w'] (no redundant or ambiguous bracketing).
ParenthesisWord parse_parenthesis_word(std::string_view text);

/// δ followed by Φ: x[w] -> x ≺ δ(w), [w]x -> δ(w) ≻ x,
/// [w]x[w'] -> δ(w) ≻ x ≺ δ(w').
DecoratedTree delta_to_tree(const ParenthesisWord& w);

ParenthesisWord to_parenthesis_word(const DecoratedTree& t);
std::string to_string(const ParenthesisWord& w);

// ---------------------------------------------------------------------------
// ASCII expression syntax:
//   expr   := ['-'] term (('+' | '-') term)*
//   term   := [rational '*'] factor | rational
//   factor := letter | 'e' | '(' expr ('<' | '>') expr ')' | '(' expr ')'
// '<' is ≺, '>' is ≻, 'e' is the empty word, a bare rational r means r·e.

/// Parses and expands an expression. Letters above alphabet->m() are
/// rejected when an alphabet is given.
RationalPolynomial parse_dendriform_expr(std::string_view text,
                                         const Alphabet* alphabet = nullptr);

/// Renders a tree as a fully parenthesized ≺/≻ expression, choosing
/// ((l > x) < r) for trees with both subtrees nontrivial.
std::string to_expression(const DecoratedTree& t);
std::string to_expression(const RationalPolynomial& p);

}  // namespace dendro
