#pragma once

// JSON encodings of trees, polynomials, series files, certificates and
// evaluation results.
//
//   tree        null | {"l": tree, "x": i, "r": tree}
//   polynomial  [{"coeff": "p/q" | [[...]], "tree": tree}, ...]
//   series      [{"tree": tree | "expr": "...", "coeff": ...}, ...]
//               | [{"rule": "dyson", "order": N}]
//               | {"rule": "dyson" | "geometric", ...}
//               | {"m": m, "K": K, "M": M, "terms": [...]}

#include <nlohmann/json.hpp>

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <string>

#include "dendro/dendriform.hpp"
#include "dendro/iterated_integrals.hpp"
#include "dendro/operators.hpp"
#include "dendro/polynomial.hpp"
#include "dendro/tree.hpp"

namespace dendro {

using Json = nlohmann::ordered_json;

Json to_json(const DecoratedTree& t);
/// Throws ParseError on malformed input, AlphabetError for letters above
/// alphabet->m().
DecoratedTree tree_from_json(const Json& j, const Alphabet* alphabet = nullptr);

Json to_json(const Eigen::Ref<const Eigen::MatrixXd>& a);
Eigen::MatrixXd matrix_from_json(const Json& j);

Json to_json(const RationalPolynomial& p);
Json to_json(const MatrixPolynomial& p);
RationalPolynomial rational_polynomial_from_json(const Json& j);

/// Series file contents. Scalar coefficients (numbers or rational strings)
/// become multiples of the dim x dim identity.
GeneratingSeries series_from_json(const Json& j, Eigen::Index dim);
GeneratingSeries load_series(const std::string& path, Eigen::Index dim);

Json to_json(const Certificate& c);
Json residual_json(const DecoratedTree& t1, const DecoratedTree& t2, double h,
                   double residual);
Json to_json(const EvaluationResult& r);
Json to_json(const Grid& g, const MatrixPath& values);

/// Parses text as JSON, mapping syntax errors to ParseError.
Json parse_json(const std::string& text);

}  // namespace dendro
