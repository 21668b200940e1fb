#include "dendro/signal.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <utility>

namespace dendro {

Grid::Grid(double T, std::size_t N) : horizon(T), panels(N) {
  if (N < 1) throw ShapeError("a grid needs at least one panel");
  if (!(T > 0.0) || !std::isfinite(T)) {
    throw ShapeError(fmt::format("horizon must be positive, got {}", T));
  }
}

MatrixSignal::MatrixSignal(std::size_t dim, Grid grid,
                           std::vector<std::vector<Eigen::MatrixXd>> channels)
    : dim_(dim),
      grid_(grid),
      identity_(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(dim),
                                          static_cast<Eigen::Index>(dim))),
      channels_(std::move(channels)) {
  if (dim == 0) throw ShapeError("matrix dimension must be positive");
  if (grid_.panels < 1 || !(grid_.horizon > 0.0)) {
    throw ShapeError("invalid grid");
  }
  const auto d = static_cast<Eigen::Index>(dim);
  for (std::size_t i = 0; i < channels_.size(); ++i) {
    const auto& ch = channels_[i];
    if (ch.size() != grid_.nodes()) {
      throw ShapeError(fmt::format("channel {} has {} samples, grid has {}",
                                   i + 1, ch.size(), grid_.nodes()));
    }
    for (const auto& a : ch) {
      if (a.rows() != d || a.cols() != d) {
        throw ShapeError(fmt::format(
            "channel {} sample is {}x{}, expected {}x{}", i + 1, a.rows(),
            a.cols(), dim, dim));
      }
      if (!a.allFinite()) {
        throw ShapeError(fmt::format("channel {} has non-finite entries", i + 1));
      }
    }
  }
}

ScalarSignal::ScalarSignal(Grid grid, std::vector<std::vector<double>> channels)
    : grid_(grid), channels_(std::move(channels)) {
  for (const auto& ch : channels_) {
    if (ch.size() != grid_.nodes()) throw ShapeError("scalar channel length");
    for (double v : ch) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw DomainError("scalar dominating signal must be finite and >= 0");
      }
    }
  }
}

MatrixSignal ScalarSignal::as_matrix_signal() const {
  std::vector<std::vector<Eigen::MatrixXd>> out;
  out.reserve(channels_.size());
  for (const auto& ch : channels_) {
    std::vector<Eigen::MatrixXd> samples;
    samples.reserve(ch.size());
    for (double v : ch) samples.push_back(Eigen::MatrixXd::Constant(1, 1, v));
    out.push_back(std::move(samples));
  }
  return MatrixSignal(1, grid_, std::move(out));
}

double matrix_norm1(const Eigen::Ref<const Eigen::MatrixXd>& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().colwise().sum().maxCoeff();
}

ScalarSignal ubar(const MatrixSignal& u) {
  std::vector<std::vector<double>> out(u.m());
  for (std::size_t i = 1; i <= u.m(); ++i) {
    auto& ch = out[i - 1];
    ch.reserve(u.grid().nodes());
    for (const auto& a : u.channel(i)) ch.push_back(matrix_norm1(a));
  }
  return ScalarSignal(u.grid(), std::move(out));
}

std::vector<double> running_integral(const std::vector<double>& f, double h) {
  std::vector<double> out(f.size(), 0.0);
  for (std::size_t k = 1; k < f.size(); ++k) {
    out[k] = out[k - 1] + 0.5 * h * (f[k - 1] + f[k]);
  }
  return out;
}

double signal_norm(const ScalarSignal& u) {
  double best = 0.0;
  for (std::size_t i = 1; i <= u.m(); ++i) {
    best = std::max(best, running_integral(u.channel(i), u.grid().h()).back());
  }
  return best;
}

double signal_norm(const MatrixSignal& u) { return signal_norm(ubar(u)); }

MatrixSignal sample_signal(const std::vector<ChannelFunction>& channels,
                           std::size_t dim, const Grid& grid) {
  std::vector<std::vector<Eigen::MatrixXd>> out;
  out.reserve(channels.size());
  for (const auto& f : channels) {
    std::vector<Eigen::MatrixXd> samples;
    samples.reserve(grid.nodes());
    for (std::size_t k = 0; k < grid.nodes(); ++k) samples.push_back(f(grid.t(k)));
    out.push_back(std::move(samples));
  }
  return MatrixSignal(dim, grid, std::move(out));
}

MatrixSignal constant_signal(const Eigen::MatrixXd& a, const Grid& grid) {
  if (a.rows() != a.cols()) {
    throw ShapeError(fmt::format("input matrices must be square, got {}x{}",
                                 a.rows(), a.cols()));
  }
  return MatrixSignal(static_cast<std::size_t>(a.rows()), grid,
                      {std::vector<Eigen::MatrixXd>(grid.nodes(), a)});
}

ChannelFunction sinusoid_channel(Eigen::MatrixXd a0, Eigen::MatrixXd a1,
                                 double omega, double phase) {
  if (a0.rows() != a1.rows() || a0.cols() != a1.cols()) {
    throw ShapeError("sinusoid offset and amplitude differ in shape");
  }
  return [a0 = std::move(a0), a1 = std::move(a1), omega, phase](double t) {
    return Eigen::MatrixXd(a0 + std::sin(omega * t + phase) * a1);
  };
}

Eigen::Matrix3d spin_generator(char axis) {
  Eigen::Matrix3d j = Eigen::Matrix3d::Zero();
  switch (axis) {
    case 'x':
      j(1, 2) = -1.0;
      j(2, 1) = 1.0;
      break;
    case 'y':
      j(0, 2) = 1.0;
      j(2, 0) = -1.0;
      break;
    case 'z':
      j(0, 1) = -1.0;
      j(1, 0) = 1.0;
      break;
    default:
      throw DomainError(fmt::format("unknown spin axis '{}'", axis));
  }
  return j;
}

ChannelFunction spin_field_function(double magnitude, std::string_view schedule,
                                    double horizon) {
  const Eigen::Matrix3d jx = spin_generator('x'), jy = spin_generator('y'),
                        jz = spin_generator('z');
  if (schedule == "x" || schedule == "y" || schedule == "z") {
    const Eigen::MatrixXd j =
        magnitude * (schedule == "x" ? jx : schedule == "y" ? jy : jz);
    return [j](double) { return j; };
  }
  if (schedule == "xy") {
    return [=](double t) {
      const double theta = 0.5 * std::numbers::pi * t / horizon;
      return Eigen::MatrixXd(magnitude *
                             (std::cos(theta) * jx + std::sin(theta) * jy));
    };
  }
  if (schedule == "xy-step") {
    return [=](double t) {
      return Eigen::MatrixXd(magnitude * (t < 0.5 * horizon ? jx : jy));
    };
  }
  throw ParseError(fmt::format("unknown spin schedule \"{}\"", schedule));
}

MatrixSignal spin_field(double magnitude, std::string_view schedule,
                        const Grid& grid) {
  return sample_signal({spin_field_function(magnitude, schedule, grid.horizon)},
                       3, grid);
}

std::vector<ChannelFunction> random_smooth_channels(std::size_t m,
                                                    std::size_t dim,
                                                    std::uint64_t seed,
                                                    double amplitude) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0), freq(0.5, 3.0),
      phase(0.0, 2.0 * std::numbers::pi);
  const auto d = static_cast<Eigen::Index>(dim);
  std::vector<ChannelFunction> out;
  for (std::size_t i = 0; i < m; ++i) {
    Eigen::MatrixXd a(d, d), b(d, d), w(d, d), p(d, d);
    for (Eigen::Index r = 0; r < d; ++r) {
      for (Eigen::Index c = 0; c < d; ++c) {
        a(r, c) = amplitude * coef(rng);
        b(r, c) = amplitude * coef(rng);
        w(r, c) = freq(rng);
        p(r, c) = phase(rng);
      }
    }
    out.push_back([a, b, w, p](double t) {
      return Eigen::MatrixXd(
          a.array() + b.array() * (w.array() * t + p.array()).sin());
    });
  }
  return out;
}

// CSV ---------------------------------------------------------------------------

void write_csv(const MatrixSignal& u, std::ostream& out) {
  const std::size_t n = u.dim();
  out << "t,ch";
  for (std::size_t r = 1; r <= n; ++r) {
    for (std::size_t c = 1; c <= n; ++c) out << fmt::format(",a{}{}", r, c);
  }
  out << '\n';
  for (std::size_t k = 0; k < u.grid().nodes(); ++k) {
    for (std::size_t i = 1; i <= u.m(); ++i) {
      out << fmt::format("{:.17g},{}", u.grid().t(k), i);
      const auto& a = u.sample(i, k);
      for (Eigen::Index r = 0; r < a.rows(); ++r) {
        for (Eigen::Index c = 0; c < a.cols(); ++c) {
          out << fmt::format(",{:.17g}", a(r, c));
        }
      }
      out << '\n';
    }
  }
}

void to_csv(const MatrixSignal& u, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error(fmt::format("cannot write \"{}\"", path));
  write_csv(u, f);
}

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

double to_number(std::string_view s, std::size_t line) {
  s = trim(s);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError(fmt::format("line {}: malformed number \"{}\"", line, s));
  }
  return v;
}

}  // namespace

MatrixSignal read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty CSV input");
  const auto header = split(trim(line));
  if (header.size() < 3 || trim(header[0]) != "t" || trim(header[1]) != "ch") {
    throw ParseError("CSV header must start with t,ch,a11");
  }
  const std::size_t entries = header.size() - 2;
  const auto n = static_cast<std::size_t>(std::llround(std::sqrt(double(entries))));
  if (n * n != entries) {
    throw ShapeError(fmt::format(
        "CSV has {} matrix columns, not a square number", entries));
  }
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      if (trim(header[2 + r * n + c]) != fmt::format("a{}{}", r + 1, c + 1)) {
        throw ParseError(fmt::format("unexpected CSV column \"{}\"",
                                     header[2 + r * n + c]));
      }
    }
  }

  // (time, channel) -> matrix
  std::map<std::pair<double, std::size_t>, Eigen::MatrixXd> rows;
  std::size_t m = 0, lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    if (fields.size() != header.size()) {
      throw ParseError(fmt::format("line {}: expected {} fields, got {}",
                                   lineno, header.size(), fields.size()));
    }
    const double t = to_number(fields[0], lineno);
    const double chd = to_number(fields[1], lineno);
    if (chd < 1 || chd != std::floor(chd)) {
      throw ParseError(fmt::format("line {}: channel must be an integer >= 1",
                                   lineno));
    }
    const auto ch = static_cast<std::size_t>(chd);
    m = std::max(m, ch);
    Eigen::MatrixXd a(n, n);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        a(r, c) = to_number(fields[2 + r * n + c], lineno);
      }
    }
    if (!rows.emplace(std::make_pair(t, ch), std::move(a)).second) {
      throw ParseError(fmt::format("line {}: duplicate (t, ch) row", lineno));
    }
  }
  if (m == 0) throw ParseError("CSV has no data rows");

  std::vector<double> times;
  for (const auto& [key, a] : rows) {
    if (times.empty() || times.back() != key.first) times.push_back(key.first);
  }
  if (times.size() < 2) throw ShapeError("CSV needs at least two time nodes");
  const Grid grid(times.back() - times.front(), times.size() - 1);
  if (std::abs(times.front()) > 1e-12) {
    throw ShapeError("CSV time grid must start at t = 0");
  }
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (std::abs(times[k] - grid.t(k)) > 1e-9 * std::max(1.0, grid.horizon)) {
      throw ShapeError("CSV time grid is not uniform");
    }
  }
  std::vector<std::vector<Eigen::MatrixXd>> channels(m);
  for (std::size_t i = 1; i <= m; ++i) {
    for (double t : times) {
      auto it = rows.find({t, i});
      if (it == rows.end()) {
        throw ParseError(fmt::format("missing row for t = {}, ch = {}", t, i));
      }
      channels[i - 1].push_back(it->second);
    }
  }
  return MatrixSignal(n, grid, std::move(channels));
}

MatrixSignal from_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(fmt::format("cannot read \"{}\"", path));
  return read_csv(f);
}

}  // namespace dendro
