#include "dendro/json.hpp"

#include <fmt/format.h>

#include <fstream>
#include <limits>
#include <sstream>

namespace dendro {

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(fmt::format("invalid JSON: {}", e.what()));
  }
}

Json to_json(const DecoratedTree& t) {
  if (t.is_leaf()) return nullptr;
  Json j;
  j["l"] = to_json(t.left());
  j["x"] = t.label().index;
  j["r"] = to_json(t.right());
  return j;
}

DecoratedTree tree_from_json(const Json& j, const Alphabet* alphabet) {
  if (j.is_null()) return DecoratedTree::leaf();
  if (!j.is_object() || !j.contains("l") || !j.contains("x") || !j.contains("r")) {
    throw ParseError("tree JSON must be null or an object with l, x, r");
  }
  const Json& x = j.at("x");
  if (!x.is_number_unsigned()) {
    throw ParseError("tree JSON letter index must be a nonnegative integer");
  }
  const auto index = x.get<std::uint64_t>();
  if (index > std::numeric_limits<std::uint32_t>::max()) {
    throw AlphabetError(fmt::format("letter index {} is out of range", index));
  }
  const Letter letter{static_cast<std::uint32_t>(index)};
  if (alphabet) alphabet->check(letter);
  return graft(tree_from_json(j.at("l"), alphabet), letter,
               tree_from_json(j.at("r"), alphabet));
}

Json to_json(const Eigen::Ref<const Eigen::MatrixXd>& a) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < a.cols(); ++k) row.push_back(a(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("matrix JSON must be a nonempty list of rows");
  const std::size_t rows = j.size();
  if (!j.front().is_array() || j.front().empty()) {
    throw ParseError("matrix JSON rows must be nonempty lists");
  }
  const std::size_t cols = j.front().size();
  Eigen::MatrixXd a(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const Json& row = j[i];
    if (!row.is_array() || row.size() != cols) throw ParseError("matrix JSON rows differ in length");
    for (std::size_t k = 0; k < cols; ++k) {
      if (!row[k].is_number()) throw ParseError("matrix JSON entries must be numbers");
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = row[k].get<double>();
    }
  }
  if (!a.allFinite()) throw ParseError("matrix JSON entries must be finite");
  return a;
}

Json to_json(const RationalPolynomial& p) {
  Json out = Json::array();
  for (const auto& [t, c] : p) {
    Json term;
    term["coeff"] = to_string(c);
    term["tree"] = to_json(t);
    out.push_back(std::move(term));
  }
  return out;
}

Json to_json(const MatrixPolynomial& p) {
  Json out = Json::array();
  for (const auto& [t, c] : p) {
    Json term;
    term["coeff"] = to_json(c);
    term["tree"] = to_json(t);
    out.push_back(std::move(term));
  }
  return out;
}

RationalPolynomial rational_polynomial_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("polynomial JSON must be a list of terms");
  RationalPolynomial p;
  for (const Json& term : j) {
    if (!term.is_object() || !term.contains("coeff") || !term.contains("tree")) {
      throw ParseError("polynomial term needs coeff and tree");
    }
    const Json& c = term.at("coeff");
    Rational q;
    if (c.is_string()) {
      q = parse_rational(c.get<std::string>());
    } else if (c.is_number_integer()) {
      q = Rational(c.get<long>());
    } else {
      throw ParseError("rational coefficient must be a string or an integer");
    }
    p.add(tree_from_json(term.at("tree")), q);
  }
  return p;
}

namespace {

Eigen::MatrixXd coefficient_from_json(const Json& c, Eigen::Index dim) {
  if (c.is_array()) {
    Eigen::MatrixXd a = matrix_from_json(c);
    if (a.cols() != dim) {
      throw ShapeError(fmt::format(
          "series coefficient has {} columns, the signal dimension is {}", a.cols(), dim));
    }
    return a;
  }
  double s = 0.0;
  if (c.is_string()) {
    s = to_double(parse_rational(c.get<std::string>()));
  } else if (c.is_number()) {
    s = c.get<double>();
  } else {
    throw ParseError("series coefficient must be a number, a rational string or a matrix");
  }
  if (!std::isfinite(s)) throw ParseError("series coefficient must be finite");
  return s * Eigen::MatrixXd::Identity(dim, dim);
}

std::optional<double> optional_number(const Json& j, const char* key) {
  if (!j.contains(key)) return std::nullopt;
  if (!j.at(key).is_number()) throw ParseError(fmt::format("'{}' must be a number", key));
  return j.at(key).get<double>();
}

std::size_t count_field(const Json& j, const char* key, std::size_t fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_unsigned()) {
    throw ParseError(fmt::format("'{}' must be a nonnegative integer", key));
  }
  return j.at(key).get<std::size_t>();
}

GeneratingSeries rule_series(const Json& j, Eigen::Index dim) {
  const Json& rule = j.at("rule");
  if (!rule.is_string()) throw ParseError("'rule' must be a string");
  const std::string name = rule.get<std::string>();
  if (name == "dyson") return dyson_series(count_field(j, "order", kNoTruncation), dim);
  if (name == "geometric") {
    return geometric_series(count_field(j, "m", 1), dim,
                            optional_number(j, "K").value_or(1.0),
                            optional_number(j, "M").value_or(1.0));
  }
  throw ParseError(fmt::format("unknown series rule '{}'", name));
}

MatrixPolynomial terms_from_json(const Json& list, Eigen::Index dim) {
  MatrixPolynomial terms;
  for (const Json& term : list) {
    if (!term.is_object() || !term.contains("coeff")) {
      throw ParseError("series term needs coeff and tree (or expr)");
    }
    const Eigen::MatrixXd c = coefficient_from_json(term.at("coeff"), dim);
    if (term.contains("tree")) {
      terms.add(tree_from_json(term.at("tree")), c);
    } else if (term.contains("expr")) {
      if (!term.at("expr").is_string()) throw ParseError("'expr' must be a string");
      for (const auto& [t, q] : parse_dendriform_expr(term.at("expr").get<std::string>())) {
        terms.add(t, to_double(q) * c);
      }
    } else {
      throw ParseError("series term needs tree or expr");
    }
  }
  return terms;
}

std::size_t alphabet_of(const MatrixPolynomial& terms) {
  long top = 1;
  for (const auto& [t, c] : terms) top = std::max(top, max_letter(t));
  return static_cast<std::size_t>(top);
}

}  // namespace

GeneratingSeries series_from_json(const Json& j, Eigen::Index dim) {
  if (j.is_array()) {
    if (j.size() == 1 && j.front().is_object() && j.front().contains("rule")) {
      return rule_series(j.front(), dim);
    }
    for (const Json& term : j) {
      if (term.is_object() && term.contains("rule")) {
        throw ParseError("a rule entry must be the only entry of a series file");
      }
    }
    MatrixPolynomial terms = terms_from_json(j, dim);
    const std::size_t m = alphabet_of(terms);
    return finite_series(std::move(terms), m);
  }
  if (!j.is_object()) throw ParseError("series JSON must be a list or an object");
  if (j.contains("rule")) return rule_series(j, dim);
  if (!j.contains("terms") || !j.at("terms").is_array()) {
    throw ParseError("series object needs 'rule' or a 'terms' list");
  }
  MatrixPolynomial terms = terms_from_json(j.at("terms"), dim);
  const std::size_t m = count_field(j, "m", alphabet_of(terms));
  return finite_series(std::move(terms), m, optional_number(j, "K"),
                       optional_number(j, "M"));
}

GeneratingSeries load_series(const std::string& path, Eigen::Index dim) {
  std::ifstream in(path);
  if (!in) throw ParseError(fmt::format("cannot open series file '{}'", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return series_from_json(parse_json(buffer.str()), dim);
}

Json to_json(const Certificate& c) {
  Json j;
  j["K"] = c.K;
  j["M"] = c.M;
  j["m"] = c.m;
  j["R"] = c.R;
  j["radius"] = c.radius;
  j["tail"] = c.tail ? Json(*c.tail) : Json(nullptr);
  j["N"] = c.N;
  if (!c.diagnostic.empty()) j["diagnostic"] = c.diagnostic;
  return j;
}

Json residual_json(const DecoratedTree& t1, const DecoratedTree& t2, double h,
                   double residual) {
  Json j;
  j["tree1"] = to_json(t1);
  j["tree2"] = to_json(t2);
  j["h"] = h;
  j["residual"] = residual;
  return j;
}

Json to_json(const Grid& g, const MatrixPath& values) {
  Json j;
  j["horizon"] = g.horizon;
  j["panels"] = g.panels;
  Json rows = Json::array();
  for (std::size_t k = 0; k < values.nodes(); ++k) {
    Json row;
    row["t"] = g.t(k);
    row["value"] = to_json(values[k]);
    rows.push_back(std::move(row));
  }
  j["values"] = std::move(rows);
  return j;
}

Json to_json(const EvaluationResult& r) {
  Json j = to_json(r.grid, r.values);
  j["tree"] = r.tree ? to_json(*r.tree) : Json(nullptr);
  j["scheme_order"] = r.scheme_order;
  return j;
}

}  // namespace dendro
