// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Tolerances and sizes are fixed below.

#include <fmt/core.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "dendro/dendriform.hpp"
#include "dendro/iterated_integrals.hpp"
#include "dendro/operators.hpp"
#include "dendro/verify.hpp"

using namespace dendro;

namespace {

constexpr std::uint64_t kSeed = 20240611;

// 1. Combinatorics
constexpr std::size_t kCatalanMax = 12;
constexpr std::size_t kFactorialMax = 8;
constexpr double kCombinatoricsSeconds = 10.0;
// 2. Algebra
constexpr int kAlgebraTriples = 500;
constexpr std::size_t kAlgebraMaxOrder = 4;
constexpr std::size_t kCharMax = 7;
constexpr double kAlgebraSeconds = 60.0;
// 3. Product theorem
constexpr int kProductCases = 100;
constexpr std::size_t kProductMaxOrder = 5;
constexpr std::size_t kProductFinePanels = 4096;
constexpr double kRatioLow = 3.2, kRatioHigh = 4.8;
constexpr double kProductResidual = 1e-5;
constexpr double kProductSeconds = 300.0;
// 4. Bounds
constexpr std::size_t kBoundsPanels = 1000;  // h = 1e-3 on [0, 1]
constexpr std::size_t kBoundsMaxOrder = 4;
constexpr double kClosedFormTol = 1e-6;
constexpr int kDominationCases = 200;
constexpr double kDominationRel = 1e-6, kDominationAbs = 1e-9;
constexpr double kFactorialTol = 1e-6;
// 5. Certificate
constexpr std::size_t kCertificateMaxN = 8;
constexpr std::size_t kCertificatePanels = 32;
// 6. Dyson against RK4
constexpr std::size_t kDysonOrder = 10;
constexpr std::size_t kRk4Refinement = 8;
constexpr std::size_t kSpinPanels = 1000;
constexpr double kSpinNorm = 0.5;
constexpr double kDysonTol = 1e-4;
constexpr double kDysonSeconds = 60.0;
// 7. Magnus
constexpr std::size_t kMagnusMax = 4;
constexpr double kMagnusTol = 1e-4;
constexpr double kOrthogonalityTol = 1e-6;
// 8. Product connection
constexpr int kConnectionCases = 10;
constexpr std::size_t kConnectionMaxOrder = 2;
constexpr std::size_t kConnectionBasePanels = 64;
constexpr int kConnectionRefinements = 3;

const Letter x1{1};
const DecoratedTree leaf = DecoratedTree::leaf();

struct Outcome {
  bool passed;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

MatrixSignal spin_example() {
  const Grid grid(1.0, kSpinPanels);
  const double scale = kSpinNorm / signal_norm(spin_field(1.0, "xy", grid));
  return spin_field(scale, "xy", grid);
}

double max_path_distance(const MatrixPath& a, const MatrixPath& b) {
  double worst = 0.0;
  for (std::size_t k = 0; k < a.nodes(); ++k) worst = std::max(worst, matrix_norm1(a[k] - b[k]));
  return worst;
}

Outcome combinatorics() {
  const auto start = std::chrono::steady_clock::now();
  std::vector<std::uint64_t> segner(kCatalanMax + 1, 0);
  segner[0] = 1;
  for (std::size_t n = 1; n <= kCatalanMax; ++n)
    for (std::size_t i = 0; i < n; ++i) segner[n] += segner[i] * segner[n - 1 - i];
  bool ok = segner[12] == 208012;
  for (std::size_t n = 0; n <= kCatalanMax; ++n) {
    ok = ok && enumerate_trees(n).size() == segner[n] && catalan(n) == segner[n];
  }
  std::uint64_t f = 1;
  for (std::size_t n = 1; n <= kFactorialMax; ++n) {
    f *= n;
    ok = ok && tree_factorial(left_comb(n)) == f && tree_factorial(right_comb(n)) == f;
  }
  const double elapsed = seconds_since(start);
  return {ok && elapsed < kCombinatoricsSeconds,
          fmt::format("C_12 = {}, {:.2f} s", catalan(12), elapsed)};
}

Outcome algebra() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(kSeed);
  auto draw = [&] { return RationalPolynomial::monomial(random_tree(1 + rng() % kAlgebraMaxOrder, 3, rng)); };
  int failures = 0;
  for (int i = 0; i < kAlgebraTriples; ++i) {
    const auto a = draw(), b = draw(), c = draw();
    const bool ok = prec(prec(a, b), c) == prec(a, shuffle(b, c)) &&
                    prec(succ(a, b), c) == succ(a, prec(b, c)) &&
                    succ(shuffle(a, b), c) == succ(a, succ(b, c)) &&
                    prec(a, b) + succ(a, b) == shuffle(a, b) &&
                    shuffle(shuffle(a, b), c) == shuffle(a, shuffle(b, c));
    if (!ok) ++failures;
  }
  const bool example = shuffle(parse_dendriform_expr("(x1<x2)"), parse_dendriform_expr("x3")) ==
                       parse_dendriform_expr("(x1<(x2<x3)) + (x1<(x2>x3)) + ((x1<x2)>x3)");
  bool chars = true;
  const auto x = RationalPolynomial::monomial(graft(leaf, x1, leaf));
  for (std::size_t n = 0; n <= kCharMax; ++n) chars = chars && char_trees(n, x1) == shuffle_power(x, n);
  const double elapsed = seconds_since(start);
  return {failures == 0 && example && chars && elapsed < kAlgebraSeconds,
          fmt::format("{} failing triples, example {}, char {}, {:.2f} s", failures, example ? "ok" : "wrong",
                      chars ? "ok" : "wrong", elapsed)};
}

Outcome product_theorem() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(kSeed + 3);
  double lo = 1e300, hi = 0.0, worst_fine = 0.0;
  for (int i = 0; i < kProductCases; ++i) {
    const std::size_t total = 2 + rng() % (kProductMaxOrder - 1);
    const auto [a, b] = random_product_pair(total, 2, rng);
    const auto channels = random_smooth_channels(2, 2, rng());
    const double coarse =
        check_product_identity(a, b, sample_signal(channels, 2, Grid(1.0, kProductFinePanels / 2)));
    const double fine = check_product_identity(a, b, sample_signal(channels, 2, Grid(1.0, kProductFinePanels)));
    const double ratio = coarse / fine;
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    worst_fine = std::max(worst_fine, fine);
  }
  const double elapsed = seconds_since(start);
  const bool ok = lo >= kRatioLow && hi <= kRatioHigh && worst_fine <= kProductResidual && elapsed < kProductSeconds;
  return {ok, fmt::format("ratios in [{:.3f}, {:.3f}], finest residual {:.2e}, {:.1f} s", lo, hi, worst_fine,
                          elapsed)};
}

Outcome bounds() {
  const Grid grid(1.0, kBoundsPanels);
  // Every letter samples the constant 1 here, so E_τ(t) = t^n / γ(τ).
  const auto one = constant_signal(Eigen::MatrixXd::Identity(1, 1), grid);
  IteratedIntegrals ii(one);
  double closed = 0.0;
  for (std::size_t n = 1; n <= kBoundsMaxOrder; ++n) {
    for (const auto& [t, c] : all_decorated_trees(n, Alphabet(1))) {
      const double g = static_cast<double>(tree_factorial(skeleton(t)));
      const auto& path = ii.evaluate(t);
      for (std::size_t k = 0; k < grid.nodes(); ++k)
        closed = std::max(closed, std::abs(path[k](0, 0) - std::pow(grid.t(k), double(n)) / g));
    }
  }

  std::mt19937_64 rng(kSeed + 4);
  int violations = 0;
  for (int i = 0; i < kDominationCases; ++i) {
    const auto u = sample_signal(random_smooth_channels(2, 2, rng()), 2, Grid(1.0, 256));
    if (!check_ubar_domination(random_tree(1 + rng() % 5, 2, rng), u).holds(kDominationRel, kDominationAbs))
      ++violations;
  }

  Eigen::MatrixXd rotation(2, 2);
  rotation << 0, 1, -1, 0;  // ū = 1 at every node
  const auto rot = constant_signal(rotation, grid);
  double factorial = 0.0;
  for (std::size_t n = 1; n <= kBoundsMaxOrder; ++n) factorial = std::max(factorial, check_factorial_identity(n, rot));

  return {closed <= kClosedFormTol && violations == 0 && factorial <= kFactorialTol,
          fmt::format("closed form {:.2e}, {} domination violations, n!-identity {:.2e}", closed, violations,
                      factorial)};
}

Outcome certificate() {
  const bool radius = convergence_certificate(1.0, 1.0, 1, 0.25, kCertificateMaxN).radius == 0.5;
  // T = 1/4 and ∫|u| <= 1/4 give R = 1/4 and q = M R (m+1) = 1/2.
  const Grid grid(0.25, kCertificatePanels);
  const auto u = sample_signal({[](double t) { return Eigen::MatrixXd::Constant(1, 1, 0.8 * std::cos(7.0 * t)); }}, 1,
                               grid);
  const auto c = geometric_series(1, 1, 1.0, 1.0);
  const auto cert = convergence_certificate(c, u, kCertificateMaxN);
  const double q = cert.M * cert.R * static_cast<double>(cert.m + 1);
  FliessLimits limits;
  limits.max_general_order = kCertificateMaxN + 1;
  const auto comps = evaluate_fliess_components(c, u, kCertificateMaxN + 1, limits);
  double worst = 0.0;  // max over k, nodes of ||a_k|| / K q^k
  for (std::size_t k = 1; k < comps.size(); ++k) {
    const double bound = cert.K * std::pow(q, double(k));
    for (std::size_t j = 0; j < comps[k].nodes(); ++j) worst = std::max(worst, matrix_norm1(comps[k][j]) / bound);
  }
  return {radius && q == 0.5 && worst <= 1.0,
          fmt::format("radius {}, q = {}, max increment / majorant {:.4f}", cert.radius, q, worst)};
}

Outcome dyson() {
  const auto start = std::chrono::steady_clock::now();
  const auto u = spin_example();
  const auto y = evaluate_fliess(dyson_series(kDysonOrder, 3), u, kDysonOrder).y;
  const double dev = max_path_distance(y, rk4_reference(u, kRk4Refinement));
  const double elapsed = seconds_since(start);
  return {dev <= kDysonTol && elapsed < kDysonSeconds, fmt::format("deviation {:.2e}, {:.2f} s", dev, elapsed)};
}

Outcome magnus() {
  RationalPolynomial paper = RationalPolynomial::monomial(graft(leaf, x1, leaf));
  {
    const auto x = paper;
    const auto xx = pre_lie(x, x, kMagnusPreLieForm);
    RationalPolynomial t2 = xx, t3 = pre_lie(xx, x, kMagnusPreLieForm), t4 = pre_lie(x, xx, kMagnusPreLieForm);
    t2 *= Rational(-1, 2);
    t3 *= Rational(1, 4);
    t4 *= Rational(1, 12);
    paper += t2;
    paper += t3;
    paper += t4;
  }
  const bool exact = magnus_generating_series(3).d == paper;

  const auto u = spin_example();
  const Eigen::MatrixXd reference = rk4_reference(u, kRk4Refinement).back();
  std::vector<double> errors;
  double orthogonality = 0.0;
  for (std::size_t n = 1; n <= kMagnusMax; ++n) {
    const auto ev = magnus_evaluate(magnus_generating_series(n), u);
    errors.push_back(matrix_norm1(ev.z.back() - reference));
    if (n == kMagnusMax) {
      for (std::size_t k = 0; k < ev.z.nodes(); ++k) {
        const Eigen::MatrixXd z = ev.z[k];
        orthogonality = std::max(orthogonality, matrix_norm1(z.transpose() * z - Eigen::MatrixXd::Identity(3, 3)));
      }
    }
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < errors.size(); ++i) decreasing = decreasing && errors[i] < errors[i - 1];
  return {exact && decreasing && errors.back() <= kMagnusTol && orthogonality <= kOrthogonalityTol,
          fmt::format("order 3 {}, errors {:.2e} {:.2e} {:.2e} {:.2e}, orthogonality {:.2e}", exact ? "exact" : "differs",
                      errors[0], errors[1], errors[2], errors[3], orthogonality)};
}

Outcome product_connection_decay() {
  std::mt19937_64 rng(kSeed + 8);
  std::uniform_int_distribution<int> coeff(-3, 3);
  auto draw = [&] {
    MatrixPolynomial p(leaf, Eigen::MatrixXd::Identity(2, 2) * coeff(rng));
    for (int j = 0; j < 3; ++j) {
      p.add(random_tree(1 + rng() % kConnectionMaxOrder, 2, rng), Eigen::MatrixXd::Identity(2, 2) * coeff(rng));
    }
    p.add(random_tree(kConnectionMaxOrder, 2, rng), Eigen::MatrixXd::Identity(2, 2));
    return finite_series(p, 2);
  };
  double lo = 1e300, hi = 0.0;
  for (int i = 0; i < kConnectionCases; ++i) {
    const auto c = draw(), d = draw();
    const auto cd = product_connection(c, d);
    const auto channels = random_smooth_channels(2, 2, rng());
    std::vector<double> residuals;
    for (int r = 0; r <= kConnectionRefinements; ++r) {
      const auto u = sample_signal(channels, 2, Grid(1.0, kConnectionBasePanels << r));
      const auto fc = evaluate_fliess(c, u, 2 * kConnectionMaxOrder).y;
      const auto fd = evaluate_fliess(d, u, 2 * kConnectionMaxOrder).y;
      const auto fcd = evaluate_fliess(cd, u, 2 * kConnectionMaxOrder).y;
      residuals.push_back(max_path_distance(fc.pointwise_product(fd), fcd));
    }
    for (std::size_t r = 1; r < residuals.size(); ++r) {
      lo = std::min(lo, residuals[r - 1] / residuals[r]);
      hi = std::max(hi, residuals[r - 1] / residuals[r]);
    }
  }
  return {lo >= kRatioLow && hi <= kRatioHigh, fmt::format("halving ratios in [{:.3f}, {:.3f}]", lo, hi)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 combinatorics", combinatorics},
      {"2 dendriform algebra", algebra},
      {"3 product theorem", product_theorem},
      {"4 integral bounds", bounds},
      {"5 convergence certificate", certificate},
      {"6 dyson vs rk4", dyson},
      {"7 magnus", magnus},
      {"8 product connection", product_connection_decay},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o{false, ""};
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, fmt::format("threw: {}", e.what())};
    }
    if (!o.passed) ++failed;
    fmt::print("{} {}: {}\n", o.passed ? "PASS" : "FAIL", name, o.detail);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
