#include "dendro/operators.hpp"

#include <fmt/format.h>
#include <gmpxx.h>

#include <cmath>
#include <memory>

namespace dendro {

std::string_view to_string(SupportClass s) {
  switch (s) {
    case SupportClass::general:
      return "general";
    case SupportClass::left_comb:
      return "left_comb";
    case SupportClass::finite:
      return "finite";
  }
  return "?";
}

std::string_view to_string(GrowthRegime g) {
  switch (g) {
    case GrowthRegime::geometric:
      return "geometric";
    case GrowthRegime::factorial_left_comb:
      return "factorial_left_comb";
  }
  return "?";
}

namespace {

double factorial(std::size_t n) {
  double f = 1.0;
  for (std::size_t k = 2; k <= n; ++k) f *= static_cast<double>(k);
  return f;
}

bool all_letters_equal(const DecoratedTree& t, Letter x) {
  if (t.is_leaf()) return true;
  return t.label() == x && all_letters_equal(t.left(), x) &&
         all_letters_equal(t.right(), x);
}

double growth_bound(const GeneratingSeries& c, std::size_t order) {
  double b = c.K * std::pow(c.M, static_cast<double>(order));
  if (c.regime == GrowthRegime::factorial_left_comb) b *= factorial(order);
  return b;
}

void check_series_shape(const GeneratingSeries& c, const MatrixSignal& u) {
  if (c.cols != static_cast<Eigen::Index>(u.dim())) {
    throw ShapeError(fmt::format(
        "series coefficients are {}x{} but the signal is {}x{}", c.rows,
        c.cols, u.dim(), u.dim()));
  }
}

// Per-channel norms restricted to the series alphabet.
double restricted_signal_norm(const MatrixSignal& u, std::size_t m) {
  const ScalarSignal ub = ubar(u);
  double best = 0.0;
  for (std::size_t i = 1; i <= std::min(m, u.m()); ++i) {
    best = std::max(best, running_integral(ub.channel(i), u.grid().h()).back());
  }
  return best;
}

}  // namespace

GeneratingSeries finite_series(MatrixPolynomial terms, std::size_t m,
                               std::optional<double> K,
                               std::optional<double> M) {
  if (terms.empty()) throw DomainError("finite series needs at least one term");
  GeneratingSeries c;
  c.m = m;
  c.support = SupportClass::finite;
  c.regime = GrowthRegime::geometric;
  c.rows = terms.begin()->second.rows();
  c.cols = terms.begin()->second.cols();
  double kmax = 0.0;
  for (const auto& [t, coeff] : terms) {
    if (max_letter(t) > static_cast<long>(m)) {
      throw AlphabetError(fmt::format("term uses x{} outside x0..x{}",
                                      max_letter(t), m));
    }
    kmax = std::max(kmax, matrix_norm1(coeff));
  }
  c.K = K.value_or(kmax > 0.0 ? kmax : 1.0);
  c.M = M.value_or(1.0);
  if (!(c.K > 0.0) || !(c.M > 0.0)) {
    throw DomainError("growth constants must be positive");
  }
  auto shared = std::make_shared<const MatrixPolynomial>(terms);
  c.coefficient = [shared](const DecoratedTree& t) {
    return shared->coefficient(t);
  };
  c.terms = std::move(terms);
  return c;
}

GeneratingSeries dyson_series(std::size_t N, Eigen::Index dim) {
  if (dim < 1) throw ShapeError("dimension must be positive");
  GeneratingSeries c;
  c.m = 1;
  c.rows = c.cols = dim;
  c.support = SupportClass::left_comb;
  c.regime = GrowthRegime::factorial_left_comb;
  c.K = c.M = 1.0;
  c.rule = "dyson";
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(dim, dim);
  c.coefficient = [N, identity](const DecoratedTree& t) -> std::optional<Eigen::MatrixXd> {
    if (t.order() > N || !is_left_comb(t) || !all_letters_equal(t, Letter{1})) {
      return std::nullopt;
    }
    return identity;
  };
  return c;
}

GeneratingSeries geometric_series(std::size_t m, Eigen::Index dim, double K,
                                  double M) {
  if (dim < 1) throw ShapeError("dimension must be positive");
  if (!(K > 0.0) || !(M > 0.0)) throw DomainError("growth constants must be positive");
  GeneratingSeries c;
  c.m = m;
  c.rows = c.cols = dim;
  c.support = SupportClass::general;
  c.regime = GrowthRegime::geometric;
  c.K = K;
  c.M = M;
  c.rule = "geometric";
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(dim, dim);
  c.coefficient = [K, M, identity](const DecoratedTree& t) -> std::optional<Eigen::MatrixXd> {
    return (K * std::pow(M, static_cast<double>(t.order()))) * identity;
  };
  return c;
}

GrowthCheck check_growth(const GeneratingSeries& c, std::size_t sample_order) {
  GrowthCheck report;
  auto visit = [&](const DecoratedTree& t) {
    const auto coeff = c.coefficient(t);
    ++report.sampled;
    if (!coeff) return;
    const bool comb_required = c.support == SupportClass::left_comb ||
                               c.regime == GrowthRegime::factorial_left_comb;
    if (comb_required && !is_left_comb(t)) ++report.support_violations;
    report.worst_ratio = std::max(
        report.worst_ratio, matrix_norm1(*coeff) / growth_bound(c, t.order()));
  };
  if (c.support == SupportClass::finite && c.terms) {
    for (const auto& [t, coeff] : *c.terms) visit(t);
    return report;
  }
  const Alphabet alphabet(static_cast<std::uint32_t>(c.m));
  visit(DecoratedTree::leaf());
  for (std::size_t n = 1; n <= sample_order; ++n) {
    for (const auto& [t, one] : all_decorated_trees(n, alphabet)) visit(t);
  }
  return report;
}

namespace {

void accumulate(MatrixPath& a, const Eigen::MatrixXd& coeff, const MatrixPath& e) {
  a.data().noalias() += coeff * e.data();
}

std::vector<MatrixPath> components_finite(const GeneratingSeries& c,
                                          const MatrixSignal& u, std::size_t N,
                                          std::vector<MatrixPath> a) {
  IteratedIntegrals ev(u);
  for (const auto& [t, coeff] : *c.terms) {
    if (t.order() > N) continue;
    accumulate(a[t.order()], coeff, ev.evaluate(t));
  }
  return a;
}

std::vector<MatrixPath> components_left_comb(const GeneratingSeries& c,
                                             const MatrixSignal& u,
                                             std::size_t N,
                                             const FliessLimits& limits,
                                             std::vector<MatrixPath> a) {
  const std::size_t letters = c.m + 1;
  double words = 0.0;
  for (std::size_t k = 0; k <= N; ++k) words += std::pow(static_cast<double>(letters), k);
  if (words > static_cast<double>(limits.max_left_comb_words)) {
    throw ResourceError(fmt::format(
        "left-comb evaluation to order {} over {} letters needs {:.3g} words "
        "(limit {})",
        N, letters, words, limits.max_left_comb_words));
  }
  IteratedIntegrals ev(u);
  for (std::size_t k = 0; k <= N; ++k) {
    // Lexicographic words give canonical order on left combs.
    Word w(k, Letter{0});
    while (true) {
      const DecoratedTree t = left_comb(w);
      if (const auto coeff = c.coefficient(t)) accumulate(a[k], *coeff, ev.evaluate(t));
      std::size_t i = k;
      while (i > 0 && w[i - 1].index == c.m) w[--i].index = 0;
      if (i == 0) break;
      ++w[i - 1].index;
    }
  }
  return a;
}

// Level-wise evaluation over all decorated trees. Orders below N are kept
// so that every tree of order k is one grafting step from stored subtrees;
// the top order is streamed.
std::vector<MatrixPath> components_general(const GeneratingSeries& c,
                                           const MatrixSignal& u, std::size_t N,
                                           const FliessLimits& limits,
                                           std::vector<MatrixPath> a) {
  if (N > limits.max_general_order || c.m > limits.max_general_letters) {
    throw ResourceError(fmt::format(
        "general-support evaluation is capped at order {} with m <= {} "
        "(requested order {}, m = {})",
        limits.max_general_order, limits.max_general_letters, N, c.m));
  }
  const double path_bytes = 8.0 * static_cast<double>(u.dim() * u.dim()) *
                            static_cast<double>(u.grid().nodes());
  double stored = 0.0;
  for (std::size_t k = 1; k < N; ++k) {
    stored += std::pow(static_cast<double>(c.m + 1), k) *
              static_cast<double>(catalan(k)) * path_bytes;
  }
  if (stored > limits.max_bytes) {
    throw ResourceError(fmt::format(
        "general-support evaluation to order {} would store {:.3g} bytes "
        "(limit {:.3g}); use a coarser grid",
        N, stored, limits.max_bytes));
  }

  IteratedIntegrals ev(u, false);
  struct Level {
    std::vector<DecoratedTree> trees;
    std::vector<MatrixPath> values;
  };
  std::vector<Level> levels(N + 1);
  levels[0].trees.push_back(DecoratedTree::leaf());
  levels[0].values.push_back(ev.identity_path());
  if (const auto c0 = c.coefficient(DecoratedTree::leaf())) {
    accumulate(a[0], *c0, levels[0].values.front());
  }

  for (std::size_t k = 1; k <= N; ++k) {
    const bool keep = k < N;
    Level& level = levels[k];
    for (std::size_t i = 0; i < k; ++i) {
      const Level& lefts = levels[i];
      const Level& rights = levels[k - 1 - i];
      for (std::size_t p = 0; p < lefts.trees.size(); ++p) {
        for (std::uint32_t x = 0; x <= c.m; ++x) {
          for (std::size_t q = 0; q < rights.trees.size(); ++q) {
            DecoratedTree t = graft(lefts.trees[p], Letter{x}, rights.trees[q]);
            const auto coeff = c.coefficient(t);
            if (!keep && !coeff) continue;
            MatrixPath e = ev.graft_integral(lefts.values[p], Letter{x}, rights.values[q]);
            if (coeff) accumulate(a[k], *coeff, e);
            if (keep) {
              level.trees.push_back(std::move(t));
              level.values.push_back(std::move(e));
            }
          }
        }
      }
    }
  }
  return a;
}

}  // namespace

std::vector<MatrixPath> evaluate_fliess_components(const GeneratingSeries& c,
                                                   const MatrixSignal& u,
                                                   std::size_t N,
                                                   const FliessLimits& limits) {
  check_series_shape(c, u);
  if (c.support != SupportClass::finite && c.m > u.m()) {
    throw AlphabetError(fmt::format(
        "series alphabet x0..x{} exceeds the signal channels x0..x{}", c.m, u.m()));
  }
  if (!c.coefficient) throw DomainError("series has no coefficient rule");

  std::vector<MatrixPath> a;
  a.reserve(N + 1);
  for (std::size_t k = 0; k <= N; ++k) {
    a.emplace_back(c.rows, c.cols, u.grid().nodes());
  }
  switch (c.support) {
    case SupportClass::finite:
      if (!c.terms) throw DomainError("finite series without terms");
      return components_finite(c, u, N, std::move(a));
    case SupportClass::left_comb:
      return components_left_comb(c, u, N, limits, std::move(a));
    case SupportClass::general:
      return components_general(c, u, N, limits, std::move(a));
  }
  return a;
}

FliessOutput evaluate_fliess(const GeneratingSeries& c, const MatrixSignal& u,
                             std::size_t N, const FliessLimits& limits) {
  const auto a = evaluate_fliess_components(c, u, N, limits);
  FliessOutput out{u.grid(), a.front(), N, std::nullopt};
  for (std::size_t k = 1; k < a.size(); ++k) out.y += a[k];
  if (c.regime == GrowthRegime::geometric) {
    out.tail_bound = convergence_certificate(c, u, N).tail;
  }
  return out;
}

Certificate convergence_certificate(double K, double M, std::size_t m, double R,
                                    std::size_t N) {
  if (!(K > 0.0) || !(M > 0.0)) throw DomainError("growth constants must be positive");
  Certificate cert;
  cert.K = K;
  cert.M = M;
  cert.m = m;
  cert.R = R;
  cert.N = N;
  const double letters = static_cast<double>(m + 1);
  cert.radius = 1.0 / (M * letters);
  const double q = M * R * letters;
  if (q < 1.0) {
    cert.tail = K * std::pow(q, static_cast<double>(N + 1)) / (1.0 - q);
  } else {
    cert.diagnostic = fmt::format(
        "R = {:.6g} is not below the radius {:.6g}; the geometric majorant "
        "M R (m+1) = {:.6g} diverges",
        R, cert.radius, q);
  }
  return cert;
}

Certificate convergence_certificate(const GeneratingSeries& c,
                                    const MatrixSignal& u, std::size_t N) {
  if (c.regime != GrowthRegime::geometric) {
    throw DomainError(fmt::format(
        "convergence certificate needs the geometric growth regime, series is {}",
        to_string(c.regime)));
  }
  const double R = std::max(restricted_signal_norm(u, c.m), u.grid().horizon);
  return convergence_certificate(c.K, c.M, c.m, R, N);
}

GeneratingSeries product_connection(const GeneratingSeries& c,
                                    const GeneratingSeries& d) {
  auto scalar_terms = [](const GeneratingSeries& s, const char* name) {
    if (s.support != SupportClass::finite || !s.terms) {
      throw DomainError(fmt::format("product connection needs finite support ({})", name));
    }
    RealPolynomial out;
    for (const auto& [t, coeff] : *s.terms) {
      if (coeff.rows() != coeff.cols()) {
        throw DomainError(fmt::format("{} has non-square coefficients", name));
      }
      const double lambda = coeff(0, 0);
      const Eigen::MatrixXd scaled =
          lambda * Eigen::MatrixXd::Identity(coeff.rows(), coeff.cols());
      if (coeff != scaled) {
        throw DomainError(fmt::format(
            "{} has a coefficient that is not a multiple of the identity", name));
      }
      out.add(t, lambda);
    }
    return out;
  };
  if (c.rows != d.rows) throw ShapeError("series have different dimensions");
  const RealPolynomial product = shuffle(scalar_terms(c, "c"), scalar_terms(d, "d"));
  if (product.empty()) throw DomainError("product connection is the zero series");
  MatrixPolynomial terms;
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(c.rows, c.cols);
  for (const auto& [t, lambda] : product) terms.add(t, lambda * identity);
  return finite_series(std::move(terms), std::max(c.m, d.m));
}

Rational bernoulli(std::size_t n) {
  if (n > 20) throw ResourceError(fmt::format("bernoulli({}) exceeds the cap 20", n));
  // Σ_{k=0}^{n} binom(n+1, k) B_k = 0 for n >= 1.
  std::vector<Rational> b(n + 1);
  b[0] = 1;
  for (std::size_t j = 1; j <= n; ++j) {
    Rational sum = 0;
    for (std::size_t k = 0; k < j; ++k) {
      mpz_class binom;
      mpz_bin_uiui(binom.get_mpz_t(), j + 1, k);
      sum += Rational(binom) * b[k];
    }
    b[j] = -sum / Rational(static_cast<long>(j + 1));
    b[j].canonicalize();
  }
  return b[n];
}

namespace {

RationalPolynomial x1_monomial() {
  return RationalPolynomial::monomial(left_comb(Word{Letter{1}}));
}

}  // namespace

RationalPolynomial magnus_step(const RationalPolynomial& d, std::size_t N,
                               PreLieForm form) {
  RationalPolynomial L = x1_monomial();
  RationalPolynomial out = L;
  Rational factorial = 1;
  // L^(n) has order >= n + 1, so n < N suffices.
  for (std::size_t n = 1; n < N; ++n) {
    L = pre_lie(d, L, form, N);
    if (L.empty()) break;
    factorial *= static_cast<long>(n);
    const Rational weight = bernoulli(n) / factorial;
    if (weight == 0) continue;
    RationalPolynomial term = L;
    term *= weight;
    out += term;
  }
  return out;
}

MagnusSeries magnus_generating_series(std::size_t N, PreLieForm form) {
  if (N == 0) throw DomainError("Magnus truncation order must be at least 1");
  if (N > 6) throw ResourceError(fmt::format("Magnus order {} exceeds the cap 6", N));
  RationalPolynomial prev = x1_monomial();
  for (std::size_t k = 2; k <= N + 2; ++k) {
    RationalPolynomial next = magnus_step(prev, N, form);
    if (next == prev) return {k, N, form, std::move(next)};
    prev = std::move(next);
  }
  throw Error(fmt::format(
      "Magnus recursion did not become stationary within {} iterations", N + 2));
}

RationalPolynomial magnus_order3_reference(PreLieForm form) {
  const RationalPolynomial x = x1_monomial();
  const RationalPolynomial xx = pre_lie(x, x, form);
  RationalPolynomial a = xx, b = pre_lie(xx, x, form), c = pre_lie(x, xx, form);
  a *= Rational(-1, 2);
  b *= Rational(1, 4);
  c *= Rational(1, 12);
  return x + a + b + c;
}

MagnusEvaluation magnus_evaluate(const MagnusSeries& d, const MatrixSignal& u) {
  if (u.m() < 1) throw DomainError("Magnus evaluation needs the system channel x1");
  MagnusEvaluation out{evaluate_polynomial(d.d, u), {}};
  const auto n = static_cast<Eigen::Index>(u.dim());
  out.z = MatrixPath(n, n, u.grid().nodes());
  for (std::size_t k = 0; k < u.grid().nodes(); ++k) {
    out.z[k] = matrix_exp(out.omega.values[k]);
  }
  return out;
}

double magnus_ad_form_residual(const MagnusSeries& d, const MatrixSignal& u) {
  const MagnusEvaluation ev = magnus_evaluate(d, u);
  const MatrixPath& omega = ev.omega.values;
  const auto n = static_cast<Eigen::Index>(u.dim());
  const std::size_t nodes = u.grid().nodes();
  std::vector<double> weights(d.order);
  Rational factorial = 1;
  for (std::size_t j = 0; j < d.order; ++j) {
    if (j > 0) factorial *= static_cast<long>(j);
    weights[j] = to_double(bernoulli(j) / factorial);
  }
  MatrixPath integrand(n, n, nodes);
  for (std::size_t k = 0; k < nodes; ++k) {
    const Eigen::MatrixXd om = omega[k];
    Eigen::MatrixXd ad = u.sample(1, k);
    Eigen::MatrixXd sum = weights[0] * ad;
    for (std::size_t j = 1; j < d.order; ++j) {
      ad = (om * ad - ad * om).eval();
      sum += weights[j] * ad;
    }
    integrand[k] = sum;
  }
  const double half_h = 0.5 * u.grid().h();
  Eigen::MatrixXd running = Eigen::MatrixXd::Zero(n, n);
  double worst = matrix_norm1(omega[0]);
  for (std::size_t k = 1; k < nodes; ++k) {
    running += half_h * (integrand[k - 1] + integrand[k]);
    worst = std::max(worst, matrix_norm1(omega[k] - running));
  }
  return worst;
}

Eigen::MatrixXd matrix_exp(const Eigen::Ref<const Eigen::MatrixXd>& a) {
  if (a.rows() != a.cols()) throw ShapeError("matrix_exp needs a square matrix");
  if (!a.allFinite()) throw DomainError("matrix_exp of a non-finite matrix");
  const Eigen::Index n = a.rows();
  const double norm = matrix_norm1(a);
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Eigen::MatrixXd b = a / std::ldexp(1.0, squarings);
  Eigen::MatrixXd sum = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd term = sum;
  // ||b|| <= 1/2: 30 terms are far past double precision.
  for (int j = 1; j <= 30; ++j) {
    term = (term * b / static_cast<double>(j)).eval();
    sum += term;
    if (matrix_norm1(term) <= 1e-18 * matrix_norm1(sum)) break;
  }
  for (int s = 0; s < squarings; ++s) sum = (sum * sum).eval();
  return sum;
}

MatrixPath rk4_reference(const MatrixSignal& u, std::size_t refinement) {
  if (u.m() < 1) throw DomainError("RK4 reference needs the system channel x1");
  if (refinement < 1) throw DomainError("refinement must be at least 1");
  const auto n = static_cast<Eigen::Index>(u.dim());
  const std::size_t nodes = u.grid().nodes();
  const double H = u.grid().h() / static_cast<double>(refinement);
  MatrixPath out(n, n, nodes);
  Eigen::MatrixXd z = Eigen::MatrixXd::Identity(n, n);
  out[0] = z;
  const auto& samples = u.channel(1);
  auto at = [&](std::size_t k, double theta) -> Eigen::MatrixXd {
    return (1.0 - theta) * samples[k] + theta * samples[k + 1];
  };
  const double r = static_cast<double>(refinement);
  for (std::size_t k = 0; k + 1 < nodes; ++k) {
    for (std::size_t j = 0; j < refinement; ++j) {
      const double t0 = static_cast<double>(j) / r;
      const Eigen::MatrixXd u0 = at(k, t0);
      const Eigen::MatrixXd um = at(k, t0 + 0.5 / r);
      const Eigen::MatrixXd u1 = at(k, t0 + 1.0 / r);
      const Eigen::MatrixXd k1 = u0 * z;
      const Eigen::MatrixXd k2 = um * (z + 0.5 * H * k1);
      const Eigen::MatrixXd k3 = um * (z + 0.5 * H * k2);
      const Eigen::MatrixXd k4 = u1 * (z + H * k3);
      z += (H / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    out[k + 1] = z;
  }
  return out;
}

}  // namespace dendro
