#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>

namespace emk {

template <int N> using Vec = Eigen::Matrix<double, N, 1>;
template <int N> using Mat = Eigen::Matrix<double, N, N>;

/// A point of a coordinate chart. For the product charts of the quartic
/// family the coordinates are ordered (t, theta, u, theta2).
template <int N> struct ChartPoint {
  std::array<double, N> x{};

  double operator[](std::size_t i) const { return x[i]; }
  double& operator[](std::size_t i) { return x[i]; }

  ChartPoint shifted(int axis, double delta) const {
    ChartPoint q = *this;
    q.x[static_cast<std::size_t>(axis)] += delta;
    return q;
  }

  std::string str() const {
    std::ostringstream os;
    os.precision(17);
    os << '(';
    for (int i = 0; i < N; ++i) os << (i ? ", " : "") << x[static_cast<std::size_t>(i)];
    os << ')';
    return os.str();
  }
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularMetric : public Error {
 public:
  using Error::Error;
};

class DomainBoundary : public Error {
 public:
  using Error::Error;
};

class NotJInvariant : public Error {
 public:
  using Error::Error;
};

class NonPositivePotential : public Error {
 public:
  using Error::Error;
};

class ZeroSelfDualPart : public Error {
 public:
  using Error::Error;
};

class InvalidParams : public Error {
 public:
  using Error::Error;
};

/// Coordinate rectangle of a chart. Periodic axes (angles) have no boundary;
/// the others are open intervals.
template <int N> struct Domain {
  std::array<double, N> lower{};
  std::array<double, N> upper{};
  std::array<bool, N> periodic{};

  static Domain unbounded() {
    Domain d;
    d.lower.fill(-INFINITY);
    d.upper.fill(INFINITY);
    return d;
  }

  double extent(int i) const {
    auto k = static_cast<std::size_t>(i);
    return upper[k] - lower[k];
  }

  bool contains(const ChartPoint<N>& p) const {
    for (std::size_t i = 0; i < N; ++i) {
      if (periodic[i]) continue;
      if (!std::isfinite(p.x[i]) || !(p.x[i] > lower[i]) || !(p.x[i] < upper[i])) return false;
    }
    return true;
  }
};

inline constexpr double kPi = 3.14159265358979323846264338327950288;

}  // namespace emk
