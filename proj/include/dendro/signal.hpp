#pragma once

// Matrix-valued inputs u = (u_1, ..., u_m) sampled on a uniform grid, with
// the drift channel u_0 fixed to the identity.

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "dendro/errors.hpp"

namespace dendro {

/// Uniform grid t_k = k h, k = 0..N, h = T / N.
struct Grid {
  double horizon = 1.0;
  std::size_t panels = 1;

  Grid() = default;
  Grid(double T, std::size_t N);

  double h() const { return horizon / static_cast<double>(panels); }
  double t(std::size_t k) const { return static_cast<double>(k) * h(); }
  std::size_t nodes() const { return panels + 1; }

  friend bool operator==(const Grid&, const Grid&) = default;
};

/// A matrix-valued function of time for one channel.
using ChannelFunction = std::function<Eigen::MatrixXd(double)>;

class MatrixSignal {
 public:
  /// channels[i][k] is u_{i+1}(t_k); all entries dim x dim and finite.
  MatrixSignal(std::size_t dim, Grid grid,
               std::vector<std::vector<Eigen::MatrixXd>> channels);

  std::size_t m() const { return channels_.size(); }
  std::size_t dim() const { return dim_; }
  const Grid& grid() const { return grid_; }

  /// u_i(t_k); u_0 is the identity.
  const Eigen::MatrixXd& sample(std::size_t channel, std::size_t k) const {
    return channel == 0 ? identity_ : channels_[channel - 1][k];
  }
  const std::vector<Eigen::MatrixXd>& channel(std::size_t i) const {
    return channels_.at(i - 1);
  }

 private:
  std::size_t dim_;
  Grid grid_;
  Eigen::MatrixXd identity_;
  std::vector<std::vector<Eigen::MatrixXd>> channels_;
};

/// Nonnegative scalar channels on a grid; channel 0 is the constant 1.
class ScalarSignal {
 public:
  ScalarSignal(Grid grid, std::vector<std::vector<double>> channels);

  std::size_t m() const { return channels_.size(); }
  const Grid& grid() const { return grid_; }
  double sample(std::size_t channel, std::size_t k) const {
    return channel == 0 ? 1.0 : channels_[channel - 1][k];
  }
  const std::vector<double>& channel(std::size_t i) const {
    return channels_.at(i - 1);
  }

  /// The same channels as 1x1 matrices, for evaluation.
  MatrixSignal as_matrix_signal() const;

 private:
  Grid grid_;
  std::vector<std::vector<double>> channels_;
};

/// Maximum absolute column sum.
double matrix_norm1(const Eigen::Ref<const Eigen::MatrixXd>& a);

/// Pointwise ū_j(t_k) = ||u_j(t_k)||_1.
ScalarSignal ubar(const MatrixSignal& u);

/// Running trapezoidal integral of a sampled function, starting at 0.
std::vector<double> running_integral(const std::vector<double>& f, double h);

/// max_i ∫_0^T ||u_i(s)||_1 ds by the trapezoid rule (0 when m = 0).
double signal_norm(const MatrixSignal& u);
double signal_norm(const ScalarSignal& u);

// Builders --------------------------------------------------------------------

MatrixSignal sample_signal(const std::vector<ChannelFunction>& channels,
                           std::size_t dim, const Grid& grid);

/// One channel equal to A at every node.
MatrixSignal constant_signal(const Eigen::MatrixXd& a, const Grid& grid);

/// u(t) = A0 + A1 sin(ω t + φ).
ChannelFunction sinusoid_channel(Eigen::MatrixXd a0, Eigen::MatrixXd a1,
                                 double omega, double phase);

/// Real skew-symmetric generators of so(3): [Jx, Jy] = Jz and cyclic.
Eigen::Matrix3d spin_generator(char axis);

/// U(t) = B (n(t) · J) for a field direction n(t) given by the schedule:
///   "x", "y", "z"  fixed axis;
///   "xy"           direction rotating smoothly from x (t = 0) to y (t = T);
///   "xy-step"      x on [0, T/2), y on [T/2, T].
ChannelFunction spin_field_function(double magnitude, std::string_view schedule,
                                    double horizon);
MatrixSignal spin_field(double magnitude, std::string_view schedule,
                        const Grid& grid);

/// m channels of dim x dim matrices whose entries are a + b sin(ω t + φ)
/// with coefficients drawn from a seeded generator.
std::vector<ChannelFunction> random_smooth_channels(std::size_t m,
                                                    std::size_t dim,
                                                    std::uint64_t seed,
                                                    double amplitude = 1.0);

// CSV: header t,ch,a11,a12,...,ann; one row per (node, channel), ch >= 1.

void write_csv(const MatrixSignal& u, std::ostream& out);
void to_csv(const MatrixSignal& u, const std::string& path);
MatrixSignal read_csv(std::istream& in);
MatrixSignal from_csv(const std::string& path);

}  // namespace dendro
