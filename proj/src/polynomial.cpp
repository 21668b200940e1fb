#include "dendro/polynomial.hpp"

namespace dendro {

RealPolynomial to_real(const RationalPolynomial& p) {
  RealPolynomial out;
  for (const auto& [t, c] : p) out.add(t, to_double(c));
  return out;
}

MatrixPolynomial to_matrix(const RationalPolynomial& p, Eigen::Index dim) {
  MatrixPolynomial out;
  for (const auto& [t, c] : p) {
    out.add(t, to_double(c) * Eigen::MatrixXd::Identity(dim, dim));
  }
  return out;
}

}  // namespace dendro
