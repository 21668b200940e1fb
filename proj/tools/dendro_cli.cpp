// dendro: batch front end for trees, dendriform products, iterated
// integrals, Fliess operators and the Magnus recursion.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "dendro/dendriform.hpp"
#include "dendro/iterated_integrals.hpp"
#include "dendro/json.hpp"
#include "dendro/operators.hpp"
#include "dendro/signal.hpp"
#include "dendro/tree.hpp"
#include "dendro/verify.hpp"

namespace {

using namespace dendro;

struct GridOptions {
  std::size_t panels = 1000;
  double horizon = 1.0;
};

// csv:<path> | const:<json matrix> | spin:<B>,<schedule>
MatrixSignal load_signal(const std::string& spec, const GridOptions& g) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) {
    throw ParseError(fmt::format("signal spec '{}' needs a csv:, const: or spin: prefix", spec));
  }
  const std::string kind = spec.substr(0, colon);
  const std::string arg = spec.substr(colon + 1);
  if (kind == "csv") return from_csv(arg);
  const Grid grid(g.horizon, g.panels);
  if (kind == "const") return constant_signal(matrix_from_json(parse_json(arg)), grid);
  if (kind == "spin") {
    const auto comma = arg.find(',');
    if (comma == std::string::npos) throw ParseError("spin signal needs <B>,<schedule>");
    double magnitude = 0.0;
    try {
      std::size_t used = 0;
      magnitude = std::stod(arg.substr(0, comma), &used);
      if (used != comma) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ParseError(fmt::format("invalid field magnitude '{}'", arg.substr(0, comma)));
    }
    return spin_field(magnitude, arg.substr(comma + 1), grid);
  }
  throw ParseError(fmt::format("unknown signal kind '{}'", kind));
}

// dyson:N | geometric:m,K,M | <path>
GeneratingSeries load_series_spec(const std::string& spec, Eigen::Index dim) {
  if (spec.rfind("dyson:", 0) == 0) {
    const std::string n = spec.substr(6);
    if (n.empty() || n.find_first_not_of("0123456789") != std::string::npos) {
      throw ParseError(fmt::format("invalid Dyson order '{}'", n));
    }
    return dyson_series(std::stoul(n), dim);
  }
  if (spec.rfind("geometric:", 0) == 0) {
    unsigned m = 0;
    double K = 0.0, M = 0.0;
    char tail = 0;
    if (std::sscanf(spec.c_str() + 10, "%u,%lf,%lf%c", &m, &K, &M, &tail) != 3) {
      throw ParseError("geometric series spec is geometric:<m>,<K>,<M>");
    }
    return geometric_series(m, dim, K, M);
  }
  return load_series(spec, dim);
}

std::string format_matrix(const Eigen::Ref<const Eigen::MatrixXd>& a) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    out += i ? "; " : "";
    for (Eigen::Index k = 0; k < a.cols(); ++k) {
      out += fmt::format("{}{:.12g}", k ? ", " : "", a(i, k));
    }
  }
  return out + "]";
}

void write_path_csv(const Grid& grid, const MatrixPath& values, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(fmt::format("cannot write '{}'", path));
  write_csv(EvaluationResult{grid, values, std::nullopt, 2}, out);
}

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const AlphabetError*>(&e)) return "alphabet";
  if (dynamic_cast<const ArityError*>(&e)) return "arity";
  if (dynamic_cast<const ResourceError*>(&e)) return "resource";
  if (dynamic_cast<const DomainError*>(&e)) return "domain";
  if (dynamic_cast<const ShapeError*>(&e)) return "shape";
  if (dynamic_cast<const ParseError*>(&e)) return "parse";
  return "error";
}

void emit_json(const Json& j) { std::cout << j.dump(2) << '\n'; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dendriform Fliess operators: trees, products, iterated integrals"};
  app.require_subcommand(1);
  app.fallthrough();
  bool json = false;
  app.add_flag("--json", json, "Machine-readable JSON output");

  // trees enum
  auto* trees = app.add_subcommand("trees", "Planar binary trees");
  trees->require_subcommand(1);
  auto* trees_enum = trees->add_subcommand("enum", "List all trees of one order");
  std::size_t enum_order = 0;
  std::string decorate_word;
  trees_enum->add_option("--order", enum_order, "Number of interior vertices")->required();
  trees_enum->add_option("--decorate", decorate_word, "Decorate every tree with a word, e.g. x1x2x1");

  // algebra
  auto* algebra = app.add_subcommand("algebra", "Products in the free dendriform algebra");
  algebra->require_subcommand(1);
  std::string lhs, rhs, prelie_form = "prec-minus-succ";
  std::string magnus_form = std::string(to_string(kMagnusPreLieForm));
  std::size_t max_order = kNoTruncation;
  std::vector<CLI::App*> binary_ops;
  for (const char* op : {"shuffle", "prec", "succ", "prelie"}) {
    auto* sub = algebra->add_subcommand(op, fmt::format("{} of two expressions", op));
    sub->add_option("lhs", lhs, "Left expression")->required();
    sub->add_option("rhs", rhs, "Right expression")->required();
    sub->add_option("--max-order", max_order, "Drop terms above this order");
    if (std::string(op) == "prelie") {
      sub->add_option("--form", prelie_form, "prec-minus-succ | succ-minus-prec | succ-minus-swapped-prec");
    }
    binary_ops.push_back(sub);
  }
  auto* algebra_char = algebra->add_subcommand("char", "Sum of all order-n trees with one letter");
  std::size_t char_order = 0;
  std::string char_letter = "x1";
  algebra_char->add_option("--order", char_order, "Order n")->required();
  algebra_char->add_option("--letter", char_letter, "Decorating letter");

  // eval tree
  GridOptions grid;
  std::string signal_spec, out_path;
  auto add_grid = [&](CLI::App* sub) {
    sub->add_option("--signal", signal_spec, "csv:<path> | const:<matrix> | spin:<B>,<schedule>")->required();
    sub->add_option("--grid", grid.panels, "Grid panels N (ignored for csv signals)")->check(CLI::PositiveNumber);
    sub->add_option("--horizon", grid.horizon, "Horizon T (ignored for csv signals)")->check(CLI::PositiveNumber);
    sub->add_option("--out", out_path, "Write the time series as CSV");
  };
  auto* eval = app.add_subcommand("eval", "Iterated integrals");
  eval->require_subcommand(1);
  auto* eval_tree = eval->add_subcommand("tree", "Evaluate a tree or polynomial on a signal");
  std::string expr;
  eval_tree->add_option("--expr", expr, "Dendriform expression")->required();
  add_grid(eval_tree);

  // fliess eval
  auto* fliess = app.add_subcommand("fliess", "Dendriform Fliess operators");
  fliess->require_subcommand(1);
  auto* fliess_eval = fliess->add_subcommand("eval", "Truncated operator output");
  std::string series_spec;
  std::size_t order = 4;
  bool certificate = false;
  fliess_eval->add_option("--series", series_spec, "Series file, dyson:<N> or geometric:<m>,<K>,<M>")->required();
  fliess_eval->add_option("--order", order, "Truncation order N");
  fliess_eval->add_flag("--certificate", certificate, "Report the convergence certificate");
  add_grid(fliess_eval);

  // magnus
  auto* magnus = app.add_subcommand("magnus", "Magnus expansion from the pre-Lie recursion");
  bool compare = false;
  std::size_t refine = 8;
  magnus->add_option("--order", order, "Truncation order N (<= 6)");
  magnus->add_flag("--compare-rk4", compare, "Compare exp(Omega) with an RK4 solution");
  magnus->add_option("--refine", refine, "RK4 steps per grid panel")->check(CLI::PositiveNumber);
  magnus->add_option("--form", magnus_form, "Orientation of the pre-Lie product");
  add_grid(magnus);

  // verify
  auto* verify = app.add_subcommand("verify", "Seeded self-checks");
  std::string suite = "all";
  std::uint64_t seed = 1;
  verify->add_option("suite", suite, "axioms | catalan | product-theorem | bounds | magnus | all");
  verify->add_option("--seed", seed, "Random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (trees_enum->parsed()) {
      const auto skeletons = enumerate_trees(enum_order);
      std::optional<Word> w;
      if (!decorate_word.empty()) w = parse_word(decorate_word);
      Json list = Json::array();
      for (const auto& s : skeletons) {
        if (w) {
          const auto t = decorate(*w, s);
          if (json) {
            list.push_back(to_json(t));
          } else {
            std::cout << to_expression(t) << '\n';
          }
        } else {
          const std::string dyck = s.is_leaf() ? "|" : to_dyck(s);
          if (json) {
            Json j;
            j["dyck"] = dyck;
            j["gamma"] = tree_factorial(s);
            list.push_back(std::move(j));
          } else {
            std::cout << dyck << '\n';
          }
        }
      }
      if (json) {
        Json j;
        j["order"] = enum_order;
        j["count"] = skeletons.size();
        j["trees"] = std::move(list);
        emit_json(j);
      }
      return 0;
    }

    for (std::size_t i = 0; i < binary_ops.size(); ++i) {
      if (!binary_ops[i]->parsed()) continue;
      const auto a = parse_dendriform_expr(lhs);
      const auto b = parse_dendriform_expr(rhs);
      RationalPolynomial result;
      const std::string op = binary_ops[i]->get_name();
      if (op == "shuffle") result = shuffle(a, b, max_order);
      if (op == "prec") result = prec(a, b, max_order);
      if (op == "succ") result = succ(a, b, max_order);
      if (op == "prelie") result = pre_lie(a, b, parse_pre_lie_form(prelie_form), max_order);
      if (json) {
        Json j;
        j["op"] = op;
        j["expression"] = to_expression(result);
        j["terms"] = to_json(result);
        emit_json(j);
      } else {
        std::cout << to_expression(result) << '\n';
      }
      return 0;
    }

    if (algebra_char->parsed()) {
      const Word w = parse_word(char_letter);
      if (w.size() != 1) throw ParseError("--letter takes a single letter such as x1");
      const auto result = char_trees(char_order, w.front());
      if (json) {
        Json j;
        j["order"] = char_order;
        j["count"] = result.size();
        j["expression"] = to_expression(result);
        j["terms"] = to_json(result);
        emit_json(j);
      } else {
        std::cout << to_expression(result) << '\n';
      }
      return 0;
    }

    if (eval_tree->parsed()) {
      const auto u = load_signal(signal_spec, grid);
      const auto p = parse_dendriform_expr(expr);
      EvaluationResult r = evaluate_polynomial(p, u);
      if (p.size() == 1 && p.begin()->second == 1) r.tree = p.begin()->first;
      if (!out_path.empty()) write_path_csv(r.grid, r.values, out_path);
      if (json) {
        Json j;
        j["expression"] = to_expression(p);
        j["h"] = u.grid().h();
        j["final"] = to_json(r.values.back());
        j["tree"] = r.tree ? to_json(*r.tree) : Json(nullptr);
        j["scheme_order"] = r.scheme_order;
        emit_json(j);
      } else {
        std::cout << fmt::format("E[{}](T = {}) = {}\n", to_expression(p), u.grid().horizon,
                                 format_matrix(r.values.back()));
      }
      return 0;
    }

    if (fliess_eval->parsed()) {
      const auto u = load_signal(signal_spec, grid);
      const auto c = load_series_spec(series_spec, static_cast<Eigen::Index>(u.dim()));
      const auto out = evaluate_fliess(c, u, order);
      if (!out_path.empty()) write_path_csv(out.grid, out.y, out_path);
      std::optional<Certificate> cert;
      if (certificate) cert = convergence_certificate(c, u, order);
      if (json) {
        Json j;
        j["order"] = order;
        j["support"] = std::string(to_string(c.support));
        j["regime"] = std::string(to_string(c.regime));
        j["final"] = to_json(out.y.back());
        j["tail_bound"] = out.tail_bound ? Json(*out.tail_bound) : Json(nullptr);
        if (cert) j["certificate"] = to_json(*cert);
        emit_json(j);
      } else {
        std::cout << fmt::format("F_c[u](T = {}) ~ {}\n", u.grid().horizon, format_matrix(out.y.back()));
        std::cout << "tail bound: "
                  << (out.tail_bound ? fmt::format("{:.6g}", *out.tail_bound) : "not available") << '\n';
        if (cert) {
          std::cout << fmt::format("certificate: K = {:.6g}, M = {:.6g}, m = {}, R = {:.6g}, radius = {:.6g}, tail = {}\n",
                                   cert->K, cert->M, cert->m, cert->R, cert->radius,
                                   cert->tail ? fmt::format("{:.6g}", *cert->tail) : "none");
          if (!cert->diagnostic.empty()) std::cout << cert->diagnostic << '\n';
        }
      }
      return 0;
    }

    if (magnus->parsed()) {
      const auto u = load_signal(signal_spec, grid);
      const auto d = magnus_generating_series(order, parse_pre_lie_form(magnus_form));
      const auto ev = magnus_evaluate(d, u);
      if (!out_path.empty()) write_path_csv(u.grid(), ev.z, out_path);
      std::optional<Eigen::MatrixXd> reference;
      if (compare) reference = rk4_reference(u, refine).back();
      const Eigen::MatrixXd z = ev.z.back();
      if (json) {
        Json j;
        j["order"] = order;
        j["iteration"] = d.iteration;
        j["form"] = std::string(to_string(d.form));
        j["series"] = to_expression(d.d);
        j["terms"] = to_json(d.d);
        j["omega"] = to_json(ev.omega.values.back());
        j["z"] = to_json(z);
        if (reference) {
          j["rk4"] = to_json(*reference);
          j["error"] = matrix_norm1(z - *reference);
        }
        emit_json(j);
      } else {
        std::cout << "d = " << to_expression(d.d) << '\n';
        std::cout << fmt::format("stationary at iteration {}\n", d.iteration);
        std::cout << "Omega(T) = " << format_matrix(ev.omega.values.back()) << '\n';
        std::cout << "exp(Omega(T)) = " << format_matrix(z) << '\n';
        if (reference) {
          std::cout << "RK4(T) = " << format_matrix(*reference) << '\n';
          std::cout << fmt::format("error = {:.6e}\n", matrix_norm1(z - *reference));
        }
      }
      return 0;
    }

    if (verify->parsed()) {
      const auto results = run_verify(suite, seed);
      bool all = true;
      Json list = Json::array();
      for (const auto& r : results) {
        all = all && r.passed;
        if (json) {
          Json j;
          j["suite"] = r.suite;
          j["check"] = r.name;
          j["passed"] = r.passed;
          j["detail"] = r.detail;
          list.push_back(std::move(j));
        } else {
          std::cout << fmt::format("{} [{}] {}{}\n", r.passed ? "PASS" : "FAIL", r.suite, r.name,
                                   r.detail.empty() ? "" : " (" + r.detail + ")");
        }
      }
      if (json) {
        Json j;
        j["seed"] = seed;
        j["passed"] = all;
        j["checks"] = std::move(list);
        emit_json(j);
      }
      return all ? 0 : 1;
    }
  } catch (const std::exception& e) {
    if (json) {
      Json j;
      j["error"] = error_kind(e);
      j["message"] = e.what();
      std::cerr << j.dump() << '\n';
    } else {
      std::cerr << "error: " << e.what() << '\n';
    }
    return 1;
  }
  return 2;
}
