#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "dendro/signal.hpp"

using namespace dendro;

namespace {

Eigen::MatrixXd m2(double a, double b, double c, double d) {
  Eigen::MatrixXd out(2, 2);
  out << a, b, c, d;
  return out;
}

bool commute(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a * b - b * a).norm() < 1e-14;
}

}  // namespace

TEST_CASE("grid geometry") {
  const Grid g(2.0, 4);
  CHECK(g.h() == doctest::Approx(0.5));
  CHECK(g.nodes() == 5);
  CHECK(g.t(4) == doctest::Approx(2.0));
  CHECK_NOTHROW(Grid(1.0, 1));
  CHECK_THROWS_AS(Grid(1.0, 0), ShapeError);
  CHECK_THROWS_AS(Grid(0.0, 4), ShapeError);
  CHECK_THROWS_AS(Grid(-1.0, 4), ShapeError);
}

TEST_CASE("matrix 1-norm is the maximum column sum") {
  CHECK(matrix_norm1(Eigen::MatrixXd::Identity(2, 2)) == 1.0);
  CHECK(matrix_norm1(m2(0, 1, -1, 0)) == 1.0);
  CHECK(matrix_norm1(m2(1, 2, 3, 4)) == 6.0);
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n;
  for (int i = 0; i < 1000; ++i) {
    const Eigen::MatrixXd a = m2(n(rng), n(rng), n(rng), n(rng));
    const Eigen::MatrixXd b = m2(n(rng), n(rng), n(rng), n(rng));
    CHECK(matrix_norm1(a * b) <= matrix_norm1(a) * matrix_norm1(b) * (1 + 1e-15));
  }
}

TEST_CASE("ubar and signal norms") {
  const Grid g(2.0, 8);
  const auto rot = constant_signal(m2(0, 1, -1, 0), g);
  const auto ub = ubar(rot);
  for (double v : ub.channel(1)) CHECK(v == 1.0);
  CHECK(ub.sample(0, 3) == 1.0);
  CHECK(signal_norm(rot) == doctest::Approx(2.0));
  CHECK(signal_norm(constant_signal(Eigen::MatrixXd::Zero(2, 2), g)) == 0.0);
  const auto identity_bar = ubar(constant_signal(Eigen::MatrixXd::Identity(3, 3), g));
  for (double v : identity_bar.channel(1)) CHECK(v == 1.0);

  const auto two = sample_signal({[](double) { return Eigen::MatrixXd::Identity(2, 2) * 0.5; },
                                  [](double) { return Eigen::MatrixXd::Identity(2, 2) * 1.5; }},
                                 2, g);
  CHECK(signal_norm(two) == doctest::Approx(3.0));

  const auto scalar = ubar(rot).as_matrix_signal();
  CHECK(signal_norm(scalar) == doctest::Approx(signal_norm(rot)));
  CHECK(signal_norm(ubar(rot)) == doctest::Approx(signal_norm(rot)));
}

TEST_CASE("running trapezoid integral") {
  const auto r = running_integral({0.0, 1.0, 2.0, 3.0}, 0.5);
  CHECK(r[0] == 0.0);
  CHECK(r[1] == doctest::Approx(0.25));
  CHECK(r[3] == doctest::Approx(2.25));
}

TEST_CASE("signal validation") {
  const Grid g(1.0, 2);
  CHECK_THROWS_AS(MatrixSignal(2, g, {{m2(1, 0, 0, 1), m2(1, 0, 0, 1)}}), ShapeError);
  CHECK_THROWS_AS(MatrixSignal(2, g, {{Eigen::MatrixXd::Ones(2, 3), m2(1, 0, 0, 1), m2(1, 0, 0, 1)}}),
                  ShapeError);
  Eigen::MatrixXd bad = m2(1, 0, 0, 1);
  bad(0, 1) = std::nan("");
  CHECK_THROWS_AS(MatrixSignal(2, g, {{bad, bad, bad}}), ShapeError);
  CHECK_THROWS_AS(constant_signal(Eigen::MatrixXd::Ones(2, 3), g), ShapeError);
  CHECK_THROWS_AS(ScalarSignal(g, {{1.0, -1.0, 1.0}}), DomainError);
  const auto u = constant_signal(m2(1, 2, 3, 4), g);
  CHECK(u.sample(0, 1).isIdentity());
  CHECK(u.sample(1, 2) == m2(1, 2, 3, 4));
  CHECK(u.m() == 1);
  CHECK(u.dim() == 2);
}

TEST_CASE("builders") {
  const Grid g(1.0, 10);
  const auto s = sample_signal({sinusoid_channel(m2(1, 0, 0, 1), m2(0, 1, 1, 0), 2.0, 0.5)}, 2, g);
  CHECK(s.sample(1, 3)(0, 1) == doctest::Approx(std::sin(2.0 * 0.3 + 0.5)));
  CHECK_THROWS_AS(sinusoid_channel(m2(1, 0, 0, 1), Eigen::MatrixXd::Ones(3, 3), 1.0, 0.0), ShapeError);

  const Eigen::Matrix3d jx = spin_generator('x'), jy = spin_generator('y'), jz = spin_generator('z');
  CHECK((jx * jy - jy * jx).isApprox(jz));
  CHECK((jx + jx.transpose()).isZero());
  CHECK_THROWS_AS(spin_generator('w'), DomainError);

  const auto fixed = spin_field(2.0, "x", g);
  for (std::size_t k = 0; k < g.nodes(); ++k) CHECK(commute(fixed.sample(1, 0), fixed.sample(1, k)));
  const auto step = spin_field(2.0, "xy-step", g);
  CHECK_FALSE(commute(step.sample(1, 0), step.sample(1, 10)));
  const auto rotating = spin_field(2.0, "xy", g);
  CHECK_FALSE(commute(rotating.sample(1, 1), rotating.sample(1, 7)));
  CHECK(rotating.sample(1, 0).isApprox(2.0 * Eigen::MatrixXd(jx)));
  CHECK(rotating.sample(1, 10).isApprox(2.0 * Eigen::MatrixXd(jy), 1e-12));
  CHECK_THROWS_AS(spin_field(1.0, "diagonal", g), ParseError);

  const auto a = random_smooth_channels(2, 2, 42), b = random_smooth_channels(2, 2, 42);
  CHECK(a[1](0.3) == b[1](0.3));
  CHECK(a[0](0.3) != random_smooth_channels(2, 2, 43)[0](0.3));
}

TEST_CASE("CSV round-trip and validation") {
  const Grid g(0.7, 7);
  const auto u = sample_signal(random_smooth_channels(2, 3, 5), 3, g);
  std::stringstream buffer;
  write_csv(u, buffer);
  const std::string text = buffer.str();
  CHECK(text.rfind("t,ch,a11,a12,a13,a21", 0) == 0);
  std::stringstream in(text);
  const auto v = read_csv(in);
  CHECK(v.m() == 2);
  CHECK(v.dim() == 3);
  CHECK(v.grid().panels == 7);
  CHECK(v.grid().horizon == doctest::Approx(0.7).epsilon(1e-12));
  for (std::size_t i = 1; i <= 2; ++i) {
    for (std::size_t k = 0; k < g.nodes(); ++k) {
      CHECK((v.sample(i, k) - u.sample(i, k)).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }

  auto parse = [](const std::string& s) {
    std::stringstream ss(s);
    return read_csv(ss);
  };
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(parse("time,ch,a11\n"), ParseError);
  CHECK_THROWS_AS(parse("t,ch,a11,a12\n0,1,1,2\n"), ShapeError);
  CHECK_THROWS_AS(parse("t,ch,a11\n0,1,1\n0.5,1,x\n"), ParseError);
  CHECK_THROWS_AS(parse("t,ch,a11\n0,1,1\n0,1,2\n"), ParseError);
  CHECK_THROWS_AS(parse("t,ch,a11\n0,1,1\n0.5,1,1\n1.5,1,1\n"), ShapeError);
  CHECK_THROWS_AS(parse("t,ch,a11\n0.1,1,1\n0.6,1,1\n"), ShapeError);
  CHECK_THROWS_AS(parse("t,ch,a11\n0,1,1\n0,2,1\n0.5,1,1\n"), ParseError);
  CHECK_THROWS_AS(parse("t,ch,a11\n0,0,1\n0.5,0,1\n"), ParseError);
  CHECK_NOTHROW(parse("t,ch,a11\n0.5,1,2\n0,1,1\n"));
}
