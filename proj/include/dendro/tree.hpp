#pragma once

// Planar binary trees as a free magma, optionally decorated with one
// alphabet letter per interior vertex.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "dendro/errors.hpp"

namespace dendro {

/// Letter x_i of the alphabet X = {x0, ..., xm}; x0 is the drift letter.
struct Letter {
  std::uint32_t index = 0;

  friend constexpr bool operator==(Letter, Letter) = default;
  friend constexpr auto operator<=>(Letter, Letter) = default;
};

using Word = std::vector<Letter>;

/// Alphabet {x0, ..., xm}.
class Alphabet {
 public:
  explicit Alphabet(std::uint32_t m) : m_(m) {}

  std::uint32_t m() const { return m_; }
  std::uint32_t size() const { return m_ + 1; }
  bool contains(Letter x) const { return x.index <= m_; }

  /// Throws AlphabetError when i > m.
  Letter letter(std::uint32_t i) const;
  void check(Letter x) const { (void)letter(x.index); }
  void check(const Word& w) const;

 private:
  std::uint32_t m_;
};

/// Parses "x1x0x2" (also accepts an empty string) into a word.
Word parse_word(std::string_view text);
std::string to_string(const Word& w);
std::string to_string(Letter x);

/// Immutable binary tree with shared structure. A default-constructed tree
/// is the trivial tree "|". Label is std::monostate for bare skeletons and
/// Letter for decorated trees.
template <class Label>
class BasicTree {
 public:
  BasicTree() = default;

  static BasicTree leaf() { return {}; }
  static BasicTree node(BasicTree left, Label label, BasicTree right) {
    const std::size_t order = left.order() + right.order() + 1;
    std::size_t h = std::hash<std::size_t>{}(order);
    h = mix(h, left.hash());
    h = mix(h, label_hash(label));
    h = mix(h, right.hash());
    return BasicTree(std::make_shared<const Node>(
        Node{std::move(left), label, std::move(right), order, h}));
  }

  bool is_leaf() const { return node_ == nullptr; }
  std::size_t order() const { return node_ ? node_->order : 0; }
  std::size_t hash() const { return node_ ? node_->hash : 0x9e3779b9u; }

  // Accessors below require !is_leaf().
  const BasicTree& left() const { return node_->left; }
  const BasicTree& right() const { return node_->right; }
  const Label& label() const { return node_->label; }

  /// Identity of the shared node; equal pointers imply equal trees.
  const void* id() const { return node_.get(); }

  friend bool operator==(const BasicTree& a, const BasicTree& b) {
    if (a.node_ == b.node_) return true;
    if (a.is_leaf() || b.is_leaf()) return false;
    if (a.node_->hash != b.node_->hash || a.order() != b.order()) return false;
    return a.label() == b.label() && a.left() == b.left() &&
           a.right() == b.right();
  }

  /// Canonical order: (order, left subtree, label, right subtree).
  friend std::strong_ordering operator<=>(const BasicTree& a,
                                          const BasicTree& b) {
    if (a.node_ == b.node_) return std::strong_ordering::equal;
    if (auto c = a.order() <=> b.order(); c != 0) return c;
    // Same order and not both leaves, so both are interior nodes.
    if (auto c = a.left() <=> b.left(); c != 0) return c;
    if (auto c = a.label() <=> b.label(); c != 0) return c;
    return a.right() <=> b.right();
  }

 private:
  struct Node {
    BasicTree left;
    Label label;
    BasicTree right;
    std::size_t order;
    std::size_t hash;
  };

  explicit BasicTree(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static std::size_t mix(std::size_t h, std::size_t v) {
    return h ^ (v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2));
  }
  static std::size_t label_hash(const Label& l) {
    if constexpr (std::is_same_v<Label, Letter>) {
      return std::hash<std::uint32_t>{}(l.index) * 0x100000001b3ull;
    } else {
      return 0;
    }
  }

  std::shared_ptr<const Node> node_;
};

using PlanarTree = BasicTree<std::monostate>;
using DecoratedTree = BasicTree<Letter>;

struct TreeHash {
  template <class Label>
  std::size_t operator()(const BasicTree<Label>& t) const {
    return t.hash();
  }
};

/// Binary grafting l ∨ r.
inline PlanarTree graft(PlanarTree left, PlanarTree right) {
  return PlanarTree::node(std::move(left), {}, std::move(right));
}

/// Decorated grafting l ∨_x r.
inline DecoratedTree graft(DecoratedTree left, Letter x, DecoratedTree right) {
  return DecoratedTree::node(std::move(left), x, std::move(right));
}

/// Decorated grafting that validates the letter against an alphabet.
DecoratedTree graft(DecoratedTree left, Letter x, DecoratedTree right,
                    const Alphabet& alphabet);

/// Default cap on enumeration order; C_14 = 2,674,440 trees.
inline constexpr std::size_t kDefaultEnumerationCap = 14;

/// All planar binary trees of order n in canonical order.
std::vector<PlanarTree> enumerate_trees(
    std::size_t n, std::size_t cap = kDefaultEnumerationCap);

/// Catalan number C_n computed exactly; throws std::overflow_error when the
/// value does not fit in 64 bits (n > 35).
std::uint64_t catalan(std::size_t n);

/// Left comb: first letter at the root, every left child is the trivial
/// tree, i.e. left_comb(x w) = | ∨_x left_comb(w).
DecoratedTree left_comb(const Word& w);
/// Right comb: right_comb(w x) = right_comb(w) ∨_x |.
DecoratedTree right_comb(const Word& w);
PlanarTree left_comb(std::size_t n);
PlanarTree right_comb(std::size_t n);

bool is_left_comb(const DecoratedTree& t);

/// γ(|) = 1, γ(l ∨ r) = (|l| + |r| + 1) γ(l) γ(r).
std::uint64_t tree_factorial(const PlanarTree& t);
std::uint64_t tree_factorial(const DecoratedTree& t);

PlanarTree skeleton(const DecoratedTree& t);

/// Decorates interior vertices in in-order (the vertex where the paths from
/// leaves j and j+1 meet receives the j-th letter).
DecoratedTree decorate(const Word& w, const PlanarTree& skeleton);

/// In-order reading of the interior letters.
Word foliation(const DecoratedTree& t);

/// Number of occurrences of each letter, indexed 0..max letter.
std::vector<std::size_t> letter_counts(const Word& w);

/// Dyck-word rendering: | -> "", l ∨ r -> "(" l ")" r.
std::string to_dyck(const PlanarTree& t);
PlanarTree parse_dyck(std::string_view text);

/// Largest letter index occurring in t, or -1 for the trivial tree.
long max_letter(const DecoratedTree& t);

}  // namespace dendro

template <class Label>
struct std::hash<dendro::BasicTree<Label>> {
  std::size_t operator()(const dendro::BasicTree<Label>& t) const {
    return t.hash();
  }
};
