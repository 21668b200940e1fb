#include <doctest.h>

#include <random>
#include <set>

#include "dendro/tree.hpp"
#include "dendro/verify.hpp"

using namespace dendro;

namespace {

const Letter x0{0}, x1{1}, x2{2}, x3{3};
const DecoratedTree leaf = DecoratedTree::leaf();

// Independent count: C_{n+1} = Σ C_i C_{n-i}.
std::vector<std::uint64_t> segner(std::size_t n) {
  std::vector<std::uint64_t> c(n + 1, 0);
  c[0] = 1;
  for (std::size_t k = 1; k <= n; ++k) {
    for (std::size_t i = 0; i < k; ++i) c[k] += c[i] * c[k - 1 - i];
  }
  return c;
}

PlanarTree random_skeleton(std::size_t n, std::mt19937_64& rng) {
  return skeleton(random_tree(n, 0, rng));
}

}  // namespace

TEST_CASE("grafting builds nodes and adds orders") {
  const auto single = graft(leaf, x1, leaf);
  CHECK(single.order() == 1);
  CHECK(single.left().is_leaf());
  CHECK(single.right().is_leaf());
  CHECK(single.label() == x1);

  const auto right_leaning = graft(leaf, x1, graft(leaf, x2, leaf));
  CHECK(right_leaning.order() == 2);
  CHECK(right_leaning.right().label() == x2);

  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const auto a = random_tree(rng() % 5, 3, rng);
    const auto b = random_tree(rng() % 5, 3, rng);
    CHECK(graft(a, x2, b).order() == a.order() + b.order() + 1);
  }
}

TEST_CASE("grafting validates letters against an alphabet") {
  const Alphabet alphabet(2);
  CHECK_NOTHROW(graft(leaf, x2, leaf, alphabet));
  CHECK_THROWS_AS(graft(leaf, x3, leaf, alphabet), AlphabetError);
  CHECK_THROWS_AS(alphabet.letter(3), AlphabetError);
  CHECK(alphabet.size() == 3);
}

TEST_CASE("words parse and print") {
  CHECK(parse_word("x1x0x12") == Word{x1, x0, Letter{12}});
  CHECK(parse_word("").empty());
  CHECK(to_string(Word{x2, x1}) == "x2x1");
  CHECK_THROWS_AS(parse_word("x1y"), ParseError);
  CHECK_THROWS_AS(parse_word("x"), ParseError);
}

TEST_CASE("enumeration counts match Segner's recurrence") {
  const auto c = segner(12);
  CHECK(enumerate_trees(0).size() == 1);
  CHECK(enumerate_trees(0).front().is_leaf());
  CHECK(enumerate_trees(3).size() == 5);
  CHECK(enumerate_trees(5).size() == 42);
  for (std::size_t n = 0; n <= 11; ++n) {
    CHECK(enumerate_trees(n).size() == c[n]);
    CHECK(catalan(n) == c[n]);
  }
  CHECK(catalan(12) == 208012);
  CHECK(c[12] == 208012);
}

TEST_CASE("enumeration is canonical, duplicate free and decomposes uniquely") {
  for (std::size_t n = 0; n <= 8; ++n) {
    const auto trees = enumerate_trees(n);
    for (std::size_t i = 1; i < trees.size(); ++i) CHECK(trees[i - 1] < trees[i]);
    const std::set<PlanarTree> unique(trees.begin(), trees.end());
    CHECK(unique.size() == trees.size());
    for (const auto& t : trees) {
      CHECK(t.order() == n);
      if (!t.is_leaf()) CHECK(graft(t.left(), t.right()) == t);
    }
  }
}

TEST_CASE("enumeration and catalan enforce their caps") {
  CHECK_THROWS_AS(enumerate_trees(15), ResourceError);
  CHECK_THROWS_AS(enumerate_trees(6, 5), ResourceError);
  CHECK(catalan(35) == 3116285494907301262ull);
  CHECK(catalan(36) == 11959798385860453492ull);
  CHECK_THROWS_AS(catalan(37), std::overflow_error);
}

TEST_CASE("combs have the expected shapes") {
  CHECK(left_comb(Word{}).is_leaf());
  const auto t = left_comb(Word{x1, x1, x1});
  const auto s = skeleton(t);
  const auto expected = graft(PlanarTree::leaf(),
                              graft(PlanarTree::leaf(), graft(PlanarTree::leaf(), PlanarTree::leaf())));
  CHECK(s == expected);
  CHECK(is_left_comb(t));
  CHECK(left_comb(Word{x1, x2}).label() == x1);
  CHECK(right_comb(Word{x1, x2}).label() == x2);
  CHECK(foliation(left_comb(Word{x1, x2, x3})) == Word{x1, x2, x3});
  CHECK(foliation(right_comb(Word{x1, x2, x3})) == Word{x1, x2, x3});
  CHECK_FALSE(is_left_comb(right_comb(Word{x1, x2})));
  CHECK(skeleton(left_comb(Word{x2, x0, x1})) == left_comb(3));
  CHECK(skeleton(right_comb(Word{x2, x0, x1})) == right_comb(3));
}

TEST_CASE("tree factorial") {
  CHECK(tree_factorial(PlanarTree::leaf()) == 1);
  CHECK(tree_factorial(left_comb(4)) == 24);
  const auto cherry = graft(PlanarTree::leaf(), PlanarTree::leaf());
  CHECK(tree_factorial(graft(cherry, cherry)) == 3);
  std::uint64_t f = 1;
  for (std::size_t n = 1; n <= 8; ++n) {
    f *= n;
    CHECK(tree_factorial(left_comb(n)) == f);
    CHECK(tree_factorial(right_comb(n)) == f);
  }
  for (std::size_t n = 1; n <= 6; ++n) {
    CHECK(tree_factorial(left_comb(Word(n, x1))) == tree_factorial(left_comb(n)));
  }
}

TEST_CASE("decoration reads letters in order") {
  const auto left_leaning = right_comb(3);
  const auto t = decorate(Word{x1, x2, x3}, left_leaning);
  CHECK(t.label() == x3);
  CHECK(t.left().label() == x2);
  CHECK(t.left().left().label() == x1);
  CHECK(decorate(Word{}, PlanarTree::leaf()).is_leaf());
  CHECK_THROWS_AS(decorate(Word{x1}, left_comb(2)), ArityError);
  CHECK_THROWS_AS(decorate(Word{x1, x2}, PlanarTree::leaf()), ArityError);

  std::mt19937_64 rng(5);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = rng() % 8;
    const auto s = random_skeleton(n, rng);
    Word w(n);
    for (auto& x : w) x = Letter{static_cast<std::uint32_t>(rng() % 4)};
    const auto d = decorate(w, s);
    CHECK(foliation(d) == w);
    CHECK(skeleton(d) == s);
    CHECK(d.order() == n);
  }
}

TEST_CASE("letter statistics") {
  CHECK(letter_counts(Word{x2, x0, x2}) == std::vector<std::size_t>{1, 0, 2});
  CHECK(max_letter(leaf) == -1);
  CHECK(max_letter(left_comb(Word{x0, x3, x1})) == 3);
}

TEST_CASE("Dyck rendering round-trips") {
  CHECK(to_dyck(PlanarTree::leaf()).empty());
  const auto cherry = graft(PlanarTree::leaf(), PlanarTree::leaf());
  CHECK(to_dyck(cherry) == "()");
  CHECK(to_dyck(graft(cherry, cherry)) == "(())()");
  CHECK(parse_dyck("(()())").order() == 3);
  CHECK_THROWS_AS(parse_dyck("(()"), ParseError);
  CHECK_THROWS_AS(parse_dyck(")("), ParseError);
  for (std::size_t n = 0; n <= 7; ++n) {
    for (const auto& t : enumerate_trees(n)) CHECK(parse_dyck(to_dyck(t)) == t);
  }
}

TEST_CASE("structural equality, ordering and hashing") {
  const auto a = graft(graft(leaf, x1, leaf), x2, leaf);
  const auto b = graft(graft(leaf, x1, leaf), x2, leaf);
  CHECK(a.id() != b.id());
  CHECK(a == b);
  CHECK(a.hash() == b.hash());
  CHECK((a <=> b) == std::strong_ordering::equal);
  const auto c = graft(leaf, x1, graft(leaf, x2, leaf));
  CHECK(a != c);
  CHECK(leaf < a);
  CHECK(std::hash<DecoratedTree>{}(a) == a.hash());
}
