#include "dendro/verify.hpp"

#include <fmt/format.h>

#include <cmath>
#include <functional>

#include "dendro/iterated_integrals.hpp"
#include "dendro/operators.hpp"

namespace dendro {

DecoratedTree random_tree(std::size_t order, std::uint32_t m, std::mt19937_64& rng) {
  if (order == 0) return DecoratedTree::leaf();
  std::uniform_int_distribution<std::size_t> split(0, order - 1);
  std::uniform_int_distribution<std::uint32_t> letter(0, m);
  const std::size_t left = split(rng);
  const Letter x{letter(rng)};
  DecoratedTree l = random_tree(left, m, rng);
  return graft(std::move(l), x, random_tree(order - 1 - left, m, rng));
}

RationalPolynomial random_polynomial(std::size_t terms, std::size_t max_order,
                                     std::uint32_t m, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> order(1, max_order);
  std::uniform_int_distribution<long> num(-3, 3), den(1, 3);
  RationalPolynomial p;
  for (std::size_t i = 0; i < terms; ++i) {
    Rational c(num(rng), den(rng));
    c.canonicalize();
    p.add(random_tree(order(rng), m, rng), c);
  }
  return p;
}

RationalPolynomial example_shuffle_reference() {
  return parse_dendriform_expr("(x1<(x2<x3)) + (x1<(x2>x3)) + ((x1<x2)>x3)");
}

RationalPolynomial shuffle_exponential(const RationalPolynomial& d, std::size_t N) {
  RationalPolynomial out = RationalPolynomial::monomial(DecoratedTree::leaf());
  RationalPolynomial power = out;
  Rational factorial = 1;
  for (std::size_t k = 1; k <= N; ++k) {
    power = shuffle(power, d, N);
    if (power.empty()) break;
    factorial *= static_cast<long>(k);
    RationalPolynomial term = power;
    term *= Rational(1) / factorial;
    out += term;
  }
  return out;
}

namespace {

using Checks = std::vector<CheckResult>;

void record(Checks& out, std::string_view suite, std::string name, bool ok,
            std::string detail = {}) {
  out.push_back({std::string(suite), std::move(name), ok, std::move(detail)});
}

// Segner: C_{n+1} = Σ_{i=0}^{n} C_i C_{n-i}.
std::vector<std::uint64_t> segner(std::size_t n) {
  std::vector<std::uint64_t> c(n + 1, 0);
  c[0] = 1;
  for (std::size_t k = 1; k <= n; ++k) {
    for (std::size_t i = 0; i < k; ++i) c[k] += c[i] * c[k - 1 - i];
  }
  return c;
}

void suite_catalan(Checks& out, std::uint64_t) {
  const auto c = segner(10);
  bool ok = true;
  std::string detail;
  for (std::size_t n = 0; n <= 10; ++n) {
    const auto trees = enumerate_trees(n);
    if (trees.size() != c[n] || catalan(n) != c[n]) {
      ok = false;
      detail = fmt::format("n = {}: {} trees, catalan {}, Segner {}", n,
                           trees.size(), catalan(n), c[n]);
      break;
    }
  }
  record(out, "catalan", "tree counts follow Segner's recurrence for n <= 10", ok, detail);

  ok = true;
  std::uint64_t f = 1;
  for (std::size_t n = 1; n <= 8; ++n) {
    f *= n;
    ok = ok && tree_factorial(left_comb(n)) == f && tree_factorial(right_comb(n)) == f;
  }
  record(out, "catalan", "comb tree factorials equal n! for n <= 8", ok);

  ok = true;
  for (std::size_t n = 0; n <= 7; ++n) {
    for (const auto& t : enumerate_trees(n)) ok = ok && parse_dyck(to_dyck(t)) == t;
  }
  record(out, "catalan", "Dyck encoding round-trips for n <= 7", ok);
}

void suite_axioms(Checks& out, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::size_t failures = 0;
  const std::size_t cases = 100;
  for (std::size_t i = 0; i < cases; ++i) {
    const auto a = random_polynomial(2, 3, 2, rng);
    const auto b = random_polynomial(2, 3, 2, rng);
    const auto c = random_polynomial(2, 3, 2, rng);
    const bool ok = prec(prec(a, b), c) == prec(a, shuffle(b, c)) &&
                    prec(succ(a, b), c) == succ(a, prec(b, c)) &&
                    succ(a, succ(b, c)) == succ(shuffle(a, b), c) &&
                    prec(a, b) + succ(a, b) == shuffle(a, b) &&
                    shuffle(shuffle(a, b), c) == shuffle(a, shuffle(b, c));
    if (!ok) ++failures;
  }
  record(out, "axioms",
         fmt::format("dendriform axioms, splitting and associativity on {} triples", cases),
         failures == 0, failures ? fmt::format("{} failing triples", failures) : "");

  const auto product = shuffle(parse_dendriform_expr("(x1<x2)"), parse_dendriform_expr("x3"));
  record(out, "axioms", "shuffle of (x1<x2) and x3 is the three-term sum",
         product == example_shuffle_reference(), to_expression(product));

  bool ok = true;
  const auto x1 = RationalPolynomial::monomial(left_comb(Word{Letter{1}}));
  for (std::size_t n = 0; n <= 5; ++n) {
    ok = ok && shuffle_power(x1, n) == char_trees(n, Letter{1});
  }
  record(out, "axioms", "x1 shuffle powers are the characteristic sums for n <= 5", ok);

  ok = true;
  for (std::size_t i = 0; i < 50; ++i) {
    const auto t = random_tree(1 + i % 6, 2, rng);
    ok = ok && delta_to_tree(parse_parenthesis_word(to_string(to_parenthesis_word(t)))) == t;
    ok = ok && parse_dendriform_expr(to_expression(t)) == RationalPolynomial::monomial(t);
  }
  record(out, "axioms", "parenthesis words and expressions round-trip", ok);
}

}  // namespace

std::pair<DecoratedTree, DecoratedTree> random_product_pair(std::size_t total,
                                                            std::uint32_t m,
                                                            std::mt19937_64& rng) {
  if (total < 2 || m < 1) throw DomainError("product pairs need total order >= 2 and m >= 1");
  while (true) {
    const std::size_t n1 = 1 + rng() % (total - 1);
    DecoratedTree t1 = random_tree(n1, m, rng);
    DecoratedTree t2 = random_tree(total - n1, m, rng);
    if (max_letter(t1) >= 1 || max_letter(t2) >= 1) return {std::move(t1), std::move(t2)};
  }
}

namespace {

double residual_at(const DecoratedTree& t1, const DecoratedTree& t2,
                   const std::vector<ChannelFunction>& channels, std::size_t N) {
  return check_product_identity(t1, t2, sample_signal(channels, 2, Grid(1.0, N)));
}

void suite_product(Checks& out, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::size_t failures = 0;
  double worst_ratio_gap = 0.0;
  const std::size_t cases = 10;
  for (std::size_t i = 0; i < cases; ++i) {
    const auto [t1, t2] = random_product_pair(2 + i % 4, 2, rng);
    const auto channels = random_smooth_channels(2, 2, rng());
    const double coarse = residual_at(t1, t2, channels, 256);
    const double fine = residual_at(t1, t2, channels, 512);
    const double ratio = coarse / fine;
    worst_ratio_gap = std::max(worst_ratio_gap, std::abs(ratio - 4.0));
    if (!(ratio >= 3.2 && ratio <= 4.8)) ++failures;
  }
  record(out, "product-theorem",
         fmt::format("product identity residual decays at O(h^2) on {} cases", cases),
         failures == 0, fmt::format("max |ratio - 4| = {:.3f}", worst_ratio_gap));

  const auto channels = random_smooth_channels(2, 2, rng());
  const auto u = sample_signal(channels, 2, Grid(1.0, 64));
  const double unit = check_product_identity(DecoratedTree::leaf(), random_tree(3, 2, rng), u);
  record(out, "product-theorem", "empty word is an exact unit", unit == 0.0);
}

void suite_bounds(Checks& out, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Grid fine(1.0, 1000);
  const auto ones = constant_signal(Eigen::MatrixXd::Ones(1, 1), fine);
  double worst = 0.0;
  for (std::size_t n = 0; n <= 4; ++n) {
    for (const auto& s : enumerate_trees(n)) {
      const auto t = decorate(Word(n, Letter{1}), s);
      const double value = evaluate_tree(t, ones).values.back()(0, 0);
      worst = std::max(worst, std::abs(value - 1.0 / static_cast<double>(tree_factorial(s))));
    }
  }
  record(out, "bounds", "constant input gives 1/gamma(t) for n <= 4", worst <= 1e-6,
         fmt::format("max error {:.3e}", worst));

  std::size_t failures = 0;
  for (std::size_t i = 0; i < 50; ++i) {
    const auto u = sample_signal(random_smooth_channels(2, 2, rng()), 2, Grid(1.0, 64));
    const auto report = check_ubar_domination(random_tree(1 + i % 4, 2, rng), u);
    if (!report.holds(1e-6, 1e-9)) ++failures;
  }
  record(out, "bounds", "norm domination by the u-bar integral on 50 cases",
         failures == 0, failures ? fmt::format("{} violations", failures) : "");

  worst = 0.0;
  for (std::size_t n = 1; n <= 4; ++n) {
    worst = std::max(worst, check_factorial_identity(n, ones));
  }
  record(out, "bounds", "shuffle-power factorial identity for n <= 4", worst <= 1e-6,
         fmt::format("max residual {:.3e}", worst));
}

void suite_magnus(Checks& out, std::uint64_t) {
  const bool bern = bernoulli(0) == 1 && bernoulli(1) == Rational(-1, 2) &&
                    bernoulli(2) == Rational(1, 6) && bernoulli(3) == 0 &&
                    bernoulli(4) == Rational(-1, 30);
  record(out, "magnus", "Bernoulli numbers B0..B4", bern);

  const auto d3 = magnus_generating_series(3);
  record(out, "magnus", "order-3 series has coefficients 1, -1/2, 1/4, 1/12",
         d3.d == magnus_order3_reference(), to_expression(d3.d));

  const auto d4 = magnus_generating_series(4);
  const auto dyson = [](std::size_t N) {
    RationalPolynomial p;
    for (std::size_t k = 0; k <= N; ++k) p.add(left_comb(Word(k, Letter{1})), 1);
    return p;
  }(4);
  record(out, "magnus", "shuffle exponential of the order-4 series is the Dyson sum",
         shuffle_exponential(d4.d, 4) == dyson);

  const Grid grid(1.0, 400);
  const double scale = 0.5 / signal_norm(spin_field(1.0, "xy", grid));
  const auto u = spin_field(scale, "xy", grid);
  const auto ref = rk4_reference(u, 8);
  std::vector<double> errors;
  for (std::size_t N = 1; N <= 4; ++N) {
    const auto ev = magnus_evaluate(magnus_generating_series(N), u);
    errors.push_back(matrix_norm1(ev.z.back() - ref.back()));
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < errors.size(); ++i) decreasing = decreasing && errors[i] < errors[i - 1];
  record(out, "magnus", "exp(Omega_N) approaches RK4 as N = 1..4", decreasing,
         fmt::format("errors {:.3e} {:.3e} {:.3e} {:.3e}", errors[0], errors[1],
                     errors[2], errors[3]));

  const auto z = magnus_evaluate(d4, u).z.back();
  const double orth = matrix_norm1(z.transpose() * z - Eigen::MatrixXd::Identity(3, 3));
  record(out, "magnus", "exp(Omega_4) is orthogonal for a skew-symmetric field",
         orth <= 1e-6, fmt::format("{:.3e}", orth));

  const auto fl = evaluate_fliess(dyson_series(10, 3), u, 10);
  const double dev = (fl.y - ref).max_norm1();
  record(out, "magnus", "Dyson series at order 10 matches RK4", dev <= 1e-4,
         fmt::format("{:.3e}", dev));
}

}  // namespace

const std::vector<std::string_view>& verify_suites() {
  static const std::vector<std::string_view> names = {
      "axioms", "catalan", "product-theorem", "bounds", "magnus", "all"};
  return names;
}

std::vector<CheckResult> run_verify(std::string_view suite, std::uint64_t seed) {
  using Runner = std::function<void(Checks&, std::uint64_t)>;
  const std::vector<std::pair<std::string_view, Runner>> runners = {
      {"axioms", suite_axioms},       {"catalan", suite_catalan},
      {"product-theorem", suite_product}, {"bounds", suite_bounds},
      {"magnus", suite_magnus}};
  Checks out;
  bool found = false;
  for (const auto& [name, run] : runners) {
    if (suite == "all" || suite == name) {
      run(out, seed);
      found = true;
    }
  }
  if (!found) throw DomainError(fmt::format("unknown verify suite '{}'", suite));
  return out;
}

}  // namespace dendro
