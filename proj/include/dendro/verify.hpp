#pragma once

// Seeded self-check suites behind `dendro verify`.

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dendro/dendriform.hpp"
#include "dendro/signal.hpp"
#include "dendro/tree.hpp"

namespace dendro {

struct CheckResult {
  std::string suite;
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Names accepted by run_verify, "all" included.
const std::vector<std::string_view>& verify_suites();

/// Runs one suite (or all of them); throws DomainError for an unknown name.
std::vector<CheckResult> run_verify(std::string_view suite, std::uint64_t seed);

/// Random tree of the given order over x0..xm; the left subtree size is
/// drawn uniformly at every vertex.
DecoratedTree random_tree(std::size_t order, std::uint32_t m, std::mt19937_64& rng);

/// Two nontrivial trees of combined order `total` using at least one input
/// letter. Pairs decorated by x0 alone are redrawn: their low-order products
/// are polynomials in t that the trapezoid rule can integrate exactly.
std::pair<DecoratedTree, DecoratedTree> random_product_pair(std::size_t total,
                                                            std::uint32_t m,
                                                            std::mt19937_64& rng);

/// Random rational polynomial with `terms` trees of order in [1, max_order]
/// and small integer-ratio coefficients.
RationalPolynomial random_polynomial(std::size_t terms, std::size_t max_order,
                                     std::uint32_t m, std::mt19937_64& rng);

/// The three-term sum x1 ≺ (x2 ≺ x3) + x1 ≺ (x2 ≻ x3) + (x1 ≺ x2) ≻ x3 of
/// shuffle((x1 < x2), x3).
RationalPolynomial example_shuffle_reference();

/// exp(d) = Σ_k d^{≺≻k} / k! truncated at order N.
RationalPolynomial shuffle_exponential(const RationalPolynomial& d, std::size_t N);

}  // namespace dendro
