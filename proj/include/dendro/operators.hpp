#pragma once

// Dendriform Fliess operators F_c[u] = Σ_τ (c, τ) E_τ[u], their convergence
// certificates, the Dyson and Magnus generating series, and the ODE oracle.

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dendro/dendriform.hpp"
#include "dendro/iterated_integrals.hpp"
#include "dendro/polynomial.hpp"
#include "dendro/rational.hpp"
#include "dendro/signal.hpp"
#include "dendro/tree.hpp"

namespace dendro {

enum class SupportClass { general, left_comb, finite };
enum class GrowthRegime {
  /// ||(c, τ)||_1 <= K M^|τ|
  geometric,
  /// ||(c, τ)||_1 <= K M^|τ| |τ|!, support on left combs only
  factorial_left_comb,
};

std::string_view to_string(SupportClass s);
std::string_view to_string(GrowthRegime g);

/// Coefficient lookup; nullopt means the tree is outside the support.
using CoefficientFn =
    std::function<std::optional<Eigen::MatrixXd>(const DecoratedTree&)>;

struct GeneratingSeries {
  std::size_t m = 1;  // alphabet x0..xm
  Eigen::Index rows = 1;
  Eigen::Index cols = 1;
  SupportClass support = SupportClass::finite;
  GrowthRegime regime = GrowthRegime::geometric;
  double K = 1.0;
  double M = 1.0;
  CoefficientFn coefficient;
  /// Present for finite support.
  std::optional<MatrixPolynomial> terms;
  /// Name of the rule for rule-based series ("dyson", "geometric").
  std::string rule;
};

/// Finite series from explicit terms. The growth constants default to
/// M = 1 and K = max ||c||_1, which makes the geometric bound hold. Throws
/// DomainError on an empty polynomial.
GeneratingSeries finite_series(MatrixPolynomial terms, std::size_t m,
                               std::optional<double> K = std::nullopt,
                               std::optional<double> M = std::nullopt);

/// Σ_{k<=N} x1^k on left combs with identity coefficients (dim x dim);
/// N = kNoTruncation gives the untruncated series.
GeneratingSeries dyson_series(std::size_t N, Eigen::Index dim);

/// Every decorated tree over x0..xm carries K M^|τ| I; saturates the
/// geometric growth condition.
GeneratingSeries geometric_series(std::size_t m, Eigen::Index dim, double K,
                                  double M);

struct GrowthCheck {
  /// max over sampled trees of ||(c, τ)||_1 / bound(τ); <= 1 when the
  /// declared regime holds.
  double worst_ratio = 0.0;
  /// Supported trees violating the declared support class.
  std::size_t support_violations = 0;
  std::size_t sampled = 0;

  bool ok() const { return worst_ratio <= 1.0 + 1e-12 && support_violations == 0; }
};

/// Checks every tree up to sample_order (all words for general support).
GrowthCheck check_growth(const GeneratingSeries& c, std::size_t sample_order = 5);

struct FliessLimits {
  /// General support enumerates (m+1)^n C_n trees per order n.
  std::size_t max_general_order = 8;
  std::size_t max_general_letters = 2;
  std::size_t max_left_comb_words = std::size_t{1} << 22;
  /// Budget for stored subtree evaluations in general-support evaluation.
  double max_bytes = 1.5e9;
};

struct FliessOutput {
  Grid grid;
  /// ℓ x n output per node.
  MatrixPath y;
  std::size_t order = 0;
  /// Geometric tail majorant; present only for the geometric regime with a
  /// convergent majorant.
  std::optional<double> tail_bound;
};

/// Homogeneous components a_k = Σ_{|τ| = k} (c, τ) E_τ[u], k = 0..N.
std::vector<MatrixPath> evaluate_fliess_components(const GeneratingSeries& c,
                                                   const MatrixSignal& u,
                                                   std::size_t N,
                                                   const FliessLimits& limits = {});

/// Truncated operator Σ_{|τ| <= N} (c, τ) E_τ[u], summed in canonical tree
/// order.
FliessOutput evaluate_fliess(const GeneratingSeries& c, const MatrixSignal& u,
                             std::size_t N, const FliessLimits& limits = {});

struct Certificate {
  double K = 0.0;
  double M = 0.0;
  std::size_t m = 0;
  double R = 0.0;
  double radius = 0.0;
  /// K q^{N+1} / (1 − q) with q = M R (m+1); nullopt when q >= 1.
  std::optional<double> tail;
  std::size_t N = 0;
  std::string diagnostic;
};

/// Geometric-regime certificate: radius 1/(M(m+1)), R = max(||u||, T).
/// Throws DomainError for other regimes.
Certificate convergence_certificate(const GeneratingSeries& c,
                                    const MatrixSignal& u, std::size_t N);
/// Certificate from the constants alone.
Certificate convergence_certificate(double K, double M, std::size_t m, double R,
                                    std::size_t N);

/// Finite series c ≺≻ d with F_c[u] F_d[u] = F_{c ≺≻ d}[u]; both inputs
/// must have scalar-multiple-of-identity coefficients.
GeneratingSeries product_connection(const GeneratingSeries& c,
                                    const GeneratingSeries& d);

/// Bernoulli numbers with B_1 = −1/2, n <= 20.
Rational bernoulli(std::size_t n);

/// Orientation of ▷ used by the Magnus recursion unless overridden.
inline constexpr PreLieForm kMagnusPreLieForm = PreLieForm::succ_minus_swapped_prec;

struct MagnusSeries {
  /// Index k of the first iterate d^[k] equal to its predecessor.
  std::size_t iteration = 1;
  std::size_t order = 1;
  PreLieForm form = kMagnusPreLieForm;
  RationalPolynomial d;
};

/// One step d -> Σ_n (B_n / n!) L^(n)(x1), L^(0) = x1,
/// L^(n) = d ▷ L^(n-1), truncated to order N.
RationalPolynomial magnus_step(const RationalPolynomial& d, std::size_t N,
                               PreLieForm form = kMagnusPreLieForm);

/// Iterates magnus_step from d^[1] = x1 until the order-<=N part is
/// stationary. N <= 6.
MagnusSeries magnus_generating_series(std::size_t N,
                                      PreLieForm form = kMagnusPreLieForm);

/// The order-3 polynomial x1 − ½ x1▷x1 + ¼ (x1▷x1)▷x1 + 1/12 x1▷(x1▷x1)
/// built directly from the product.
RationalPolynomial magnus_order3_reference(PreLieForm form = kMagnusPreLieForm);

struct MagnusEvaluation {
  EvaluationResult omega;
  /// exp(Ω(t_k)) per node.
  MatrixPath z;
};

/// Ω = F_d[U] with U = u_1, and z = exp(Ω).
MagnusEvaluation magnus_evaluate(const MagnusSeries& d, const MatrixSignal& u);

/// max_k ||Ω(t_k) − ∫_0^{t_k} Σ_{n<N} (B_n/n!) ad_{Ω(s)}^n (U(s)) ds||_1,
/// the ad-form consistency residual of an evaluated Ω.
double magnus_ad_form_residual(const MagnusSeries& d, const MatrixSignal& u);

/// Scaling and squaring with a truncated Taylor series.
Eigen::MatrixXd matrix_exp(const Eigen::Ref<const Eigen::MatrixXd>& a);

/// Classical RK4 for Z' = U(t) Z, Z(0) = I, U = u_1 linearly interpolated;
/// `refinement` RK4 steps per grid panel, reported on the grid.
MatrixPath rk4_reference(const MatrixSignal& u, std::size_t refinement);

}  // namespace dendro
