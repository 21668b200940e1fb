#include "dendro/tree.hpp"

#include <fmt/format.h>
#include <gmpxx.h>

#include <cctype>
#include <stdexcept>

namespace dendro {

Letter Alphabet::letter(std::uint32_t i) const {
  if (i > m_) {
    throw AlphabetError(
        fmt::format("letter x{} outside alphabet x0..x{}", i, m_));
  }
  return Letter{i};
}

void Alphabet::check(const Word& w) const {
  for (Letter x : w) check(x);
}

Word parse_word(std::string_view text) {
  Word w;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != 'x') {
      throw ParseError(fmt::format("expected 'x' at offset {} in word \"{}\"",
                                   i, text));
    }
    ++i;
    const std::size_t start = i;
    std::uint64_t v = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      v = v * 10 + static_cast<std::uint64_t>(text[i] - '0');
      if (v > 1'000'000) throw ParseError("letter index too large");
      ++i;
    }
    if (i == start) {
      throw ParseError(fmt::format("letter without index in \"{}\"", text));
    }
    w.push_back(Letter{static_cast<std::uint32_t>(v)});
  }
  return w;
}

std::string to_string(Letter x) { return fmt::format("x{}", x.index); }

std::string to_string(const Word& w) {
  std::string s;
  for (Letter x : w) s += to_string(x);
  return s;
}

DecoratedTree graft(DecoratedTree left, Letter x, DecoratedTree right,
                    const Alphabet& alphabet) {
  alphabet.check(x);
  return graft(std::move(left), x, std::move(right));
}

std::vector<PlanarTree> enumerate_trees(std::size_t n, std::size_t cap) {
  if (n > cap) {
    throw ResourceError(
        fmt::format("enumeration of order {} exceeds cap {}", n, cap));
  }
  // levels[k] holds all trees of order k; subtrees are shared.
  std::vector<std::vector<PlanarTree>> levels(n + 1);
  levels[0].push_back(PlanarTree::leaf());
  for (std::size_t k = 1; k <= n; ++k) {
    auto& out = levels[k];
    out.reserve(catalan(k));
    for (std::size_t i = 0; i < k; ++i) {
      for (const auto& l : levels[i]) {
        for (const auto& r : levels[k - 1 - i]) out.push_back(graft(l, r));
      }
    }
  }
  return std::move(levels[n]);
}

std::uint64_t catalan(std::size_t n) {
  mpz_class binom;
  mpz_bin_uiui(binom.get_mpz_t(), 2 * n, n);
  mpz_class c = binom / (n + 1);
  if (!c.fits_ulong_p()) {
    throw std::overflow_error(
        fmt::format("catalan({}) does not fit in 64 bits", n));
  }
  return c.get_ui();
}

DecoratedTree left_comb(const Word& w) {
  DecoratedTree t;
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    t = graft(DecoratedTree::leaf(), *it, std::move(t));
  }
  return t;
}

DecoratedTree right_comb(const Word& w) {
  DecoratedTree t;
  for (Letter x : w) t = graft(std::move(t), x, DecoratedTree::leaf());
  return t;
}

PlanarTree left_comb(std::size_t n) {
  PlanarTree t;
  for (std::size_t k = 0; k < n; ++k) t = graft(PlanarTree::leaf(), t);
  return t;
}

PlanarTree right_comb(std::size_t n) {
  PlanarTree t;
  for (std::size_t k = 0; k < n; ++k) t = graft(t, PlanarTree::leaf());
  return t;
}

bool is_left_comb(const DecoratedTree& t) {
  const DecoratedTree* p = &t;
  while (!p->is_leaf()) {
    if (!p->left().is_leaf()) return false;
    p = &p->right();
  }
  return true;
}

namespace {

template <class Label>
std::uint64_t factorial_impl(const BasicTree<Label>& t) {
  if (t.is_leaf()) return 1;
  return static_cast<std::uint64_t>(t.order()) * factorial_impl(t.left()) *
         factorial_impl(t.right());
}

void decorate_impl(const PlanarTree& s, const Word& w, std::size_t& pos,
                   DecoratedTree& out) {
  if (s.is_leaf()) {
    out = DecoratedTree::leaf();
    return;
  }
  DecoratedTree l, r;
  decorate_impl(s.left(), w, pos, l);
  const Letter x = w[pos++];
  decorate_impl(s.right(), w, pos, r);
  out = graft(std::move(l), x, std::move(r));
}

void foliation_impl(const DecoratedTree& t, Word& out) {
  if (t.is_leaf()) return;
  foliation_impl(t.left(), out);
  out.push_back(t.label());
  foliation_impl(t.right(), out);
}

void dyck_impl(const PlanarTree& t, std::string& out) {
  if (t.is_leaf()) return;
  out += '(';
  dyck_impl(t.left(), out);
  out += ')';
  dyck_impl(t.right(), out);
}

PlanarTree parse_dyck_impl(std::string_view text, std::size_t& pos) {
  if (pos >= text.size() || text[pos] == ')') return PlanarTree::leaf();
  if (text[pos] != '(') {
    throw ParseError(fmt::format("unexpected '{}' in tree string", text[pos]));
  }
  ++pos;
  PlanarTree l = parse_dyck_impl(text, pos);
  if (pos >= text.size() || text[pos] != ')') {
    throw ParseError("unbalanced tree string");
  }
  ++pos;
  PlanarTree r = parse_dyck_impl(text, pos);
  return graft(std::move(l), std::move(r));
}

}  // namespace

std::uint64_t tree_factorial(const PlanarTree& t) { return factorial_impl(t); }
std::uint64_t tree_factorial(const DecoratedTree& t) {
  return factorial_impl(t);
}

PlanarTree skeleton(const DecoratedTree& t) {
  if (t.is_leaf()) return PlanarTree::leaf();
  return graft(skeleton(t.left()), skeleton(t.right()));
}

DecoratedTree decorate(const Word& w, const PlanarTree& s) {
  if (w.size() != s.order()) {
    throw ArityError(fmt::format("word of length {} cannot decorate a tree "
                                 "of order {}",
                                 w.size(), s.order()));
  }
  std::size_t pos = 0;
  DecoratedTree out;
  decorate_impl(s, w, pos, out);
  return out;
}

Word foliation(const DecoratedTree& t) {
  Word w;
  w.reserve(t.order());
  foliation_impl(t, w);
  return w;
}

std::vector<std::size_t> letter_counts(const Word& w) {
  std::vector<std::size_t> counts;
  for (Letter x : w) {
    if (x.index >= counts.size()) counts.resize(x.index + 1, 0);
    ++counts[x.index];
  }
  return counts;
}

std::string to_dyck(const PlanarTree& t) {
  std::string s;
  dyck_impl(t, s);
  return s;
}

PlanarTree parse_dyck(std::string_view text) {
  std::size_t pos = 0;
  PlanarTree t = parse_dyck_impl(text, pos);
  if (pos != text.size()) throw ParseError("unbalanced tree string");
  return t;
}

long max_letter(const DecoratedTree& t) {
  if (t.is_leaf()) return -1;
  return std::max({static_cast<long>(t.label().index), max_letter(t.left()),
                   max_letter(t.right())});
}

}  // namespace dendro
