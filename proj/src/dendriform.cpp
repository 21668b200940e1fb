#include "dendro/dendriform.hpp"

#include <fmt/format.h>

#include <cctype>

namespace dendro {

// ---------------------------------------------------------------------------
// Tree-level products

const Multiplicities& ShuffleEngine::shuffle(const DecoratedTree& a,
                                             const DecoratedTree& b) {
  auto key = std::make_pair(a, b);
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;

  Multiplicities out;
  if (a.order() + b.order() <= max_order_) {
    if (a.is_leaf()) {
      out.add(b, 1);
    } else if (b.is_leaf()) {
      out.add(a, 1);
    } else {
      for (const auto& [s, k] : shuffle(a.right(), b)) {
        out.add(graft(a.left(), a.label(), s), k);
      }
      for (const auto& [s, k] : shuffle(a, b.left())) {
        out.add(graft(s, b.label(), b.right()), k);
      }
    }
  }
  return cache_.emplace(std::move(key), std::move(out)).first->second;
}

Multiplicities ShuffleEngine::prec(const DecoratedTree& a,
                                   const DecoratedTree& b) {
  if (a.is_leaf()) {
    throw DomainError("≺ is undefined with the empty word as its left operand");
  }
  Multiplicities out;
  if (a.order() + b.order() > max_order_) return out;
  for (const auto& [s, k] : shuffle(a.right(), b)) {
    out.add(graft(a.left(), a.label(), s), k);
  }
  return out;
}

Multiplicities ShuffleEngine::succ(const DecoratedTree& a,
                                   const DecoratedTree& b) {
  if (b.is_leaf()) {
    throw DomainError(
        "≻ is undefined with the empty word as its right operand");
  }
  Multiplicities out;
  if (a.order() + b.order() > max_order_) return out;
  for (const auto& [s, k] : shuffle(a, b.left())) {
    out.add(graft(s, b.label(), b.right()), k);
  }
  return out;
}

std::string_view to_string(PreLieForm form) {
  switch (form) {
    case PreLieForm::prec_minus_succ:
      return "prec-minus-succ";
    case PreLieForm::succ_minus_prec:
      return "succ-minus-prec";
    case PreLieForm::succ_minus_swapped_prec:
      return "succ-minus-swapped-prec";
  }
  return "?";
}

PreLieForm parse_pre_lie_form(std::string_view name) {
  for (auto f : {PreLieForm::prec_minus_succ, PreLieForm::succ_minus_prec,
                 PreLieForm::succ_minus_swapped_prec}) {
    if (to_string(f) == name) return f;
  }
  throw ParseError(fmt::format("unknown pre-Lie form \"{}\"", name));
}

RationalPolynomial shuffle_power(const RationalPolynomial& p, std::size_t n,
                                 std::size_t max_order) {
  RationalPolynomial out = RationalPolynomial::monomial(DecoratedTree::leaf());
  for (std::size_t k = 0; k < n; ++k) out = shuffle(out, p, max_order);
  return out;
}

RationalPolynomial char_trees(std::size_t n, Letter x, std::size_t cap) {
  const Word w(n, x);
  RationalPolynomial out;
  for (const auto& s : enumerate_trees(n, cap)) out.add(decorate(w, s), 1);
  return out;
}

RationalPolynomial all_decorated_trees(std::size_t n, const Alphabet& alphabet,
                                       std::size_t cap) {
  RationalPolynomial out;
  const auto skeletons = enumerate_trees(n, cap);
  Word w(n, Letter{0});
  while (true) {
    for (const auto& s : skeletons) out.add(decorate(w, s), 1);
    // Odometer over X^n.
    std::size_t i = n;
    while (i > 0 && w[i - 1].index == alphabet.m()) {
      w[i - 1].index = 0;
      --i;
    }
    if (i == 0) break;
    ++w[i - 1].index;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parenthesis words

namespace {

using Kind = ParenToken::Kind;
using TokenIt = std::vector<ParenToken>::const_iterator;

[[noreturn]] void reject(int condition, const std::string& detail) {
  static constexpr const char* kNames[] = {"unknown token", "(i) balance",
                                           "(ii) adjacent letters",
                                           "(iii) empty or touching brackets",
                                           "(iv) global wrap",
                                           "(v) redundant bracketing"};
  throw ParenthesisWordError(
      condition, fmt::format("not a parenthesis word, condition {}: {}",
                             kNames[condition], detail));
}

// Index of the bracket closing the one opened at `open`.
TokenIt matching_close(TokenIt open, TokenIt end) {
  int depth = 0;
  for (auto it = open; it != end; ++it) {
    if (it->kind == Kind::open) ++depth;
    if (it->kind == Kind::close && --depth == 0) return it;
  }
  return end;
}

DecoratedTree level_to_tree(TokenIt b, TokenIt e) {
  if (b == e) reject(3, "empty bracket");
  DecoratedTree left, right;
  auto it = b;
  if (it->kind == Kind::open) {
    auto close = matching_close(it, e);
    left = level_to_tree(it + 1, close);
    it = close + 1;
  }
  if (it == e || it->kind != Kind::letter) {
    reject(5, "a bracketed group must be followed or preceded by a letter");
  }
  const Letter x = it->x;
  ++it;
  if (it != e) {
    if (it->kind != Kind::open) reject(5, "unexpected token after letter");
    auto close = matching_close(it, e);
    if (close + 1 != e) {
      reject(5, "a group enclosed as ξ[ν]κ at one level");
    }
    right = level_to_tree(it + 1, close);
  }
  return graft(std::move(left), x, std::move(right));
}

void paren_impl(const DecoratedTree& t, std::vector<ParenToken>& out) {
  if (!t.left().is_leaf()) {
    out.push_back({Kind::open});
    paren_impl(t.left(), out);
    out.push_back({Kind::close});
  }
  out.push_back({Kind::letter, t.label()});
  if (!t.right().is_leaf()) {
    out.push_back({Kind::open});
    paren_impl(t.right(), out);
    out.push_back({Kind::close});
  }
}

}  // namespace

ParenthesisWord parse_parenthesis_word(std::string_view text) {
  ParenthesisWord w;
  auto& toks = w.tokens_;
  for (std::size_t i = 0; i < text.size();) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '[') {
      toks.push_back({Kind::open});
      ++i;
    } else if (c == ']') {
      toks.push_back({Kind::close});
      ++i;
    } else if (c == 'x') {
      std::size_t j = i + 1;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
        ++j;
      }
      if (j == i + 1 || j - i > 8) reject(0, "malformed letter");
      toks.push_back({Kind::letter, parse_word(text.substr(i, j - i))[0]});
      i = j;
    } else {
      reject(0, fmt::format("'{}' at offset {}", c, i));
    }
  }
  if (toks.empty()) return w;

  // (i)
  long depth = 0;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    depth += toks[i].kind == Kind::open ? 1 : toks[i].kind == Kind::close ? -1 : 0;
    if (depth < 0) reject(1, fmt::format("unmatched ']' at token {}", i + 1));
  }
  if (depth != 0) reject(1, "unclosed '['");
  // (ii), (iii)
  for (std::size_t i = 0; i + 1 < toks.size(); ++i) {
    const Kind a = toks[i].kind, b = toks[i + 1].kind;
    if (a == Kind::letter && b == Kind::letter) {
      reject(2, fmt::format("tokens {} and {}", i + 1, i + 2));
    }
    if ((a == Kind::open && b == Kind::close) ||
        (a == Kind::close && b == Kind::open)) {
      reject(3, fmt::format("tokens {} and {}", i + 1, i + 2));
    }
  }
  // (iv): the first bracket must not close at the very end.
  if (toks.front().kind == Kind::open &&
      matching_close(toks.begin(), toks.end()) == toks.end() - 1) {
    reject(4, "the whole word is enclosed in one bracket pair");
  }
  // (v)
  (void)level_to_tree(toks.begin(), toks.end());
  return w;
}

DecoratedTree delta_to_tree(const ParenthesisWord& w) {
  if (w.empty()) return DecoratedTree::leaf();
  return level_to_tree(w.tokens().begin(), w.tokens().end());
}

ParenthesisWord to_parenthesis_word(const DecoratedTree& t) {
  ParenthesisWord w;
  if (!t.is_leaf()) paren_impl(t, w.tokens_);
  return w;
}

std::string to_string(const ParenthesisWord& w) {
  std::string s;
  for (const auto& tok : w.tokens()) {
    switch (tok.kind) {
      case Kind::open:
        s += '[';
        break;
      case Kind::close:
        s += ']';
        break;
      case Kind::letter:
        s += to_string(tok.x);
        break;
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Expressions

namespace {

class ExprParser {
 public:
  ExprParser(std::string_view text, const Alphabet* alphabet)
      : text_(text), alphabet_(alphabet) {}

  RationalPolynomial parse() {
    RationalPolynomial p = expr();
    skip_ws();
    if (pos_ < text_.size()) {
      if (peek() == '<' || peek() == '>') {
        fail("products must be enclosed in parentheses, e.g. (x1<x2)");
      }
      fail(fmt::format("unexpected '{}'", peek()));
    }
    return p;
  }

 private:
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(fmt::format("expression \"{}\", offset {}: {}", text_,
                                 pos_, msg));
  }

  RationalPolynomial expr() {
    skip_ws();
    bool negate = false;
    if (peek() == '-') {
      negate = true;
      ++pos_;
    }
    RationalPolynomial acc = term();
    if (negate) acc = -acc;
    while (true) {
      skip_ws();
      const char c = peek();
      if (c != '+' && c != '-') break;
      ++pos_;
      RationalPolynomial t = term();
      if (c == '+') {
        acc += t;
      } else {
        acc -= t;
      }
    }
    return acc;
  }

  RationalPolynomial term() {
    skip_ws();
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      Rational r = rational();
      skip_ws();
      if (peek() == '*') {
        ++pos_;
        RationalPolynomial f = factor();
        f *= r;
        return f;
      }
      return RationalPolynomial(DecoratedTree::leaf(), r);
    }
    return factor();
  }

  Rational rational() {
    const std::size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (peek() == '/') {
      ++pos_;
      if (!std::isdigit(static_cast<unsigned char>(peek()))) {
        fail("malformed rational");
      }
      while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    }
    return parse_rational(text_.substr(start, pos_ - start));
  }

  RationalPolynomial factor() {
    skip_ws();
    const char c = peek();
    if (c == 'x') {
      const std::size_t start = pos_++;
      while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
      if (pos_ == start + 1) fail("letter without index");
      const Word w = parse_word(text_.substr(start, pos_ - start));
      if (alphabet_ != nullptr && !alphabet_->contains(w[0])) {
        throw AlphabetError(fmt::format(
            "expression \"{}\", offset {}: letter {} outside alphabet x0..x{}",
            text_, start, to_string(w[0]), alphabet_->m()));
      }
      return RationalPolynomial::monomial(
          graft(DecoratedTree::leaf(), w[0], DecoratedTree::leaf()));
    }
    if (c == 'e') {
      ++pos_;
      return RationalPolynomial::monomial(DecoratedTree::leaf());
    }
    if (c == '(') {
      ++pos_;
      RationalPolynomial lhs = expr();
      skip_ws();
      const char op = peek();
      if (op == ')') {
        ++pos_;
        return lhs;
      }
      if (op != '<' && op != '>') fail("expected '<', '>' or ')'");
      ++pos_;
      RationalPolynomial rhs = expr();
      skip_ws();
      if (peek() == '<' || peek() == '>') {
        fail("ambiguous chain of products; ≺ and ≻ are not associative, "
             "add parentheses");
      }
      if (peek() != ')') fail("expected ')'");
      ++pos_;
      return op == '<' ? prec(lhs, rhs) : succ(lhs, rhs);
    }
    fail(c == '\0' ? std::string("unexpected end of input")
                   : fmt::format("unexpected '{}'", c));
  }

  std::string_view text_;
  const Alphabet* alphabet_;
  std::size_t pos_ = 0;
};

void expression_impl(const DecoratedTree& t, std::string& out) {
  if (t.is_leaf()) {
    out += 'e';
    return;
  }
  const std::string x = to_string(t.label());
  const bool l = !t.left().is_leaf(), r = !t.right().is_leaf();
  if (!l && !r) {
    out += x;
  } else if (!l) {
    out += '(' + x + '<';
    expression_impl(t.right(), out);
    out += ')';
  } else if (!r) {
    out += '(';
    expression_impl(t.left(), out);
    out += '>' + x + ')';
  } else {
    out += "((";
    expression_impl(t.left(), out);
    out += '>' + x + ")<";
    expression_impl(t.right(), out);
    out += ')';
  }
}

}  // namespace

RationalPolynomial parse_dendriform_expr(std::string_view text,
                                         const Alphabet* alphabet) {
  return ExprParser(text, alphabet).parse();
}

std::string to_expression(const DecoratedTree& t) {
  std::string s;
  expression_impl(t, s);
  return s;
}

std::string to_expression(const RationalPolynomial& p) {
  if (p.empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [t, c] : p) {
    const bool negative = sgn(c) < 0;
    const Rational mag = abs(c);
    if (first) {
      if (negative) s += '-';
    } else {
      s += negative ? " - " : " + ";
    }
    first = false;
    if (mag != 1) s += to_string(mag) + '*';
    s += to_expression(t);
  }
  return s;
}

}  // namespace dendro
