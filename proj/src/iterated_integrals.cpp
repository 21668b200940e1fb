#include "dendro/iterated_integrals.hpp"

#include <fmt/format.h>

#include <cmath>
#include <ostream>

#include "dendro/dendriform.hpp"

namespace dendro {

MatrixPath MatrixPath::pointwise_product(const MatrixPath& other) const {
  MatrixPath out(rows(), other.cols(), nodes());
  for (std::size_t k = 0; k < nodes(); ++k) out[k].noalias() = (*this)[k] * other[k];
  return out;
}

double MatrixPath::max_norm1() const {
  double best = 0.0;
  for (std::size_t k = 0; k < nodes(); ++k) {
    best = std::max(best, matrix_norm1((*this)[k]));
  }
  return best;
}

void check_alphabet(const DecoratedTree& t, const MatrixSignal& u) {
  const long top = max_letter(t);
  if (top > static_cast<long>(u.m())) {
    throw AlphabetError(fmt::format(
        "tree uses x{} but the signal has channels x0..x{}", top, u.m()));
  }
}

IteratedIntegrals::IteratedIntegrals(const MatrixSignal& u, bool memoize)
    : u_(u), memoize_(memoize) {
  const auto n = static_cast<Eigen::Index>(u.dim());
  identity_ = MatrixPath(n, n, u.grid().nodes());
  for (std::size_t k = 0; k < u.grid().nodes(); ++k) {
    identity_[k].setIdentity();
  }
}

MatrixPath IteratedIntegrals::identity_path() const { return identity_; }

MatrixPath IteratedIntegrals::graft_integral(const MatrixPath& left, Letter x,
                                             const MatrixPath& right) const {
  const auto n = static_cast<Eigen::Index>(u_.dim());
  const std::size_t nodes = u_.grid().nodes();
  const double half_h = 0.5 * u_.grid().h();
  MatrixPath out(n, n, nodes);
  if (n == 1) {
    const double* l = left.data().data();
    const double* r = right.data().data();
    double* o = out.data().data();
    double prev = l[0] * u_.sample(x.index, 0)(0, 0) * r[0];
    for (std::size_t k = 1; k < nodes; ++k) {
      const double cur = l[k] * u_.sample(x.index, k)(0, 0) * r[k];
      o[k] = o[k - 1] + half_h * (prev + cur);
      prev = cur;
    }
    return out;
  }
  Eigen::MatrixXd tmp(n, n);
  tmp.noalias() = left[0] * u_.sample(x.index, 0);
  Eigen::MatrixXd prev = tmp * right[0];
  Eigen::MatrixXd cur(n, n);
  for (std::size_t k = 1; k < nodes; ++k) {
    tmp.noalias() = left[k] * u_.sample(x.index, k);
    cur.noalias() = tmp * right[k];
    out[k] = out[k - 1] + half_h * (prev + cur);
    prev.swap(cur);
  }
  return out;
}

MatrixPath IteratedIntegrals::compute(const DecoratedTree& t) {
  if (t.is_leaf()) return identity_;
  if (!memoize_) {
    const MatrixPath l = compute(t.left());
    const MatrixPath r = compute(t.right());
    return graft_integral(l, t.label(), r);
  }
  const MatrixPath& l = evaluate(t.left());
  const MatrixPath& r = evaluate(t.right());
  return graft_integral(l, t.label(), r);
}

const MatrixPath& IteratedIntegrals::evaluate(const DecoratedTree& t) {
  if (t.is_leaf()) return identity_;
  if (!memoize_) {
    check_alphabet(t, u_);
    scratch_ = compute(t);
    return scratch_;
  }
  if (auto it = cache_.find(t); it != cache_.end()) return it->second;
  check_alphabet(t, u_);
  MatrixPath value = compute(t);
  return cache_.emplace(t, std::move(value)).first->second;
}

MatrixPath IteratedIntegrals::evaluate(const RealPolynomial& p) {
  const auto n = static_cast<Eigen::Index>(u_.dim());
  MatrixPath out(n, n, u_.grid().nodes());
  for (const auto& [t, c] : p) out.data() += c * evaluate(t).data();
  return out;
}

MatrixPath IteratedIntegrals::evaluate(const RationalPolynomial& p) {
  return evaluate(to_real(p));
}

MatrixPath IteratedIntegrals::evaluate(const MatrixPolynomial& p) {
  const auto n = static_cast<Eigen::Index>(u_.dim());
  Eigen::Index rows = n;
  if (!p.empty()) {
    const auto& c = p.begin()->second;
    if (c.cols() != n) {
      throw ShapeError(fmt::format(
          "coefficient {}x{} cannot multiply {}x{} iterated integrals",
          c.rows(), c.cols(), n, n));
    }
    rows = c.rows();
  }
  MatrixPath out(rows, n, u_.grid().nodes());
  for (const auto& [t, c] : p) out.data().noalias() += c * evaluate(t).data();
  return out;
}

EvaluationResult evaluate_tree(const DecoratedTree& t, const MatrixSignal& u) {
  IteratedIntegrals ev(u);
  return {u.grid(), ev.evaluate(t), t, 2};
}

EvaluationResult evaluate_polynomial(const RationalPolynomial& p,
                                     const MatrixSignal& u) {
  IteratedIntegrals ev(u);
  return {u.grid(), ev.evaluate(p), std::nullopt, 2};
}

EvaluationResult evaluate_polynomial(const MatrixPolynomial& p,
                                     const MatrixSignal& u) {
  IteratedIntegrals ev(u);
  return {u.grid(), ev.evaluate(p), std::nullopt, 2};
}

double check_product_identity(const DecoratedTree& t1, const DecoratedTree& t2,
                              const MatrixSignal& u) {
  IteratedIntegrals ev(u);
  const MatrixPath product = ev.evaluate(t1).pointwise_product(ev.evaluate(t2));
  const MatrixPath shuffled = ev.evaluate(shuffle(
      RationalPolynomial::monomial(t1), RationalPolynomial::monomial(t2)));
  return (product - shuffled).max_norm1();
}

namespace {

// Ū_j on the grid for j = 0..m (Ū_0(t) = t).
std::vector<std::vector<double>> ubar_integrals(const MatrixSignal& u) {
  const ScalarSignal ub = ubar(u);
  std::vector<std::vector<double>> out;
  std::vector<double> t(u.grid().nodes());
  for (std::size_t k = 0; k < t.size(); ++k) t[k] = u.grid().t(k);
  out.push_back(std::move(t));
  for (std::size_t j = 1; j <= u.m(); ++j) {
    out.push_back(running_integral(ub.channel(j), u.grid().h()));
  }
  return out;
}

double factorial(std::size_t n) {
  double f = 1.0;
  for (std::size_t k = 2; k <= n; ++k) f *= static_cast<double>(k);
  return f;
}

}  // namespace

std::vector<double> bound_tree_factorial_path(const DecoratedTree& t,
                                              const MatrixSignal& u) {
  check_alphabet(t, u);
  const Word w = foliation(t);
  for (Letter x : w) {
    if (x != w.front()) {
      throw DomainError("tree-factorial bound needs a single-letter decoration");
    }
  }
  std::vector<double> out(u.grid().nodes(), 1.0);
  if (w.empty()) return out;
  const auto integrals = ubar_integrals(u);
  const auto& big_u = integrals[w.front().index];
  const double gamma = static_cast<double>(tree_factorial(t));
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = std::pow(big_u[k], static_cast<double>(w.size())) / gamma;
  }
  return out;
}

double bound_tree_factorial(const DecoratedTree& t, const MatrixSignal& u) {
  return bound_tree_factorial_path(t, u).back();
}

std::vector<double> bound_left_comb_path(const Word& w, const MatrixSignal& u) {
  check_alphabet(left_comb(w), u);
  const auto counts = letter_counts(w);
  const auto integrals = ubar_integrals(u);
  std::vector<double> out(u.grid().nodes(), 1.0);
  for (std::size_t j = 0; j < counts.size(); ++j) {
    if (counts[j] == 0) continue;
    const double nj = static_cast<double>(counts[j]);
    const double fact = factorial(counts[j]);
    for (std::size_t k = 0; k < out.size(); ++k) {
      out[k] *= std::pow(integrals[j][k], nj) / fact;
    }
  }
  return out;
}

double bound_left_comb(const Word& w, const MatrixSignal& u) {
  return bound_left_comb_path(w, u).back();
}

bool DominationReport::holds(double rel, double abs) const {
  for (std::size_t k = 0; k < lhs_path.size(); ++k) {
    if (lhs_path[k] > rhs_path[k] * (1.0 + rel) + abs) return false;
  }
  return true;
}

DominationReport check_ubar_domination(const DecoratedTree& t,
                                       const MatrixSignal& u) {
  check_alphabet(t, u);
  const MatrixSignal scalar = ubar(u).as_matrix_signal();
  IteratedIntegrals ev(u), ev_bar(scalar);
  const MatrixPath& lhs = ev.evaluate(t);
  const MatrixPath& rhs = ev_bar.evaluate(t);
  DominationReport report;
  for (std::size_t k = 0; k < lhs.nodes(); ++k) {
    report.lhs_path.push_back(matrix_norm1(lhs[k]));
    report.rhs_path.push_back(rhs[k](0, 0));
    report.lhs = std::max(report.lhs, report.lhs_path.back());
    report.rhs = std::max(report.rhs, report.rhs_path.back());
  }
  return report;
}

double check_factorial_identity(std::size_t n, const MatrixSignal& u) {
  if (u.m() < 1) throw DomainError("factorial identity needs channel x1");
  const ScalarSignal ub = ubar(u);
  const MatrixSignal scalar = ScalarSignal(u.grid(), {ub.channel(1)}).as_matrix_signal();
  IteratedIntegrals ev(scalar);
  const Letter x1{1};
  const double lhs = ev.evaluate(char_trees(n, x1)).back()(0, 0);
  const double rhs = factorial(n) * ev.evaluate(left_comb(Word(n, x1))).back()(0, 0);
  return std::abs(lhs - rhs);
}

void write_csv(const EvaluationResult& r, std::ostream& out) {
  const auto& v = r.values;
  out << 't';
  for (Eigen::Index i = 1; i <= v.rows(); ++i) {
    for (Eigen::Index j = 1; j <= v.cols(); ++j) out << fmt::format(",e{}{}", i, j);
  }
  out << '\n';
  for (std::size_t k = 0; k < v.nodes(); ++k) {
    out << fmt::format("{:.17g}", r.grid.t(k));
    const auto a = v[k];
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      for (Eigen::Index j = 0; j < a.cols(); ++j) out << fmt::format(",{:.17g}", a(i, j));
    }
    out << '\n';
  }
}

}  // namespace dendro
