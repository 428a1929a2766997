#pragma once

// Second-order forward-mode automatic differentiation in N variables.
//
// A Jet2 carries a value, its gradient and its (symmetric) Hessian with
// respect to N independent seeds. Arithmetic propagates all three exactly, so
// a metric written as a generic function of its coordinates yields exact
// first and second partials in one evaluation.

#include "emk/core.hpp"

#include <cmath>

namespace emk {

template <int N> struct Jet2 {
  double v = 0.0;
  Vec<N> d = Vec<N>::Zero();
  Mat<N> h = Mat<N>::Zero();

  Jet2() = default;
  Jet2(double value) : v(value) {}  // NOLINT: implicit constants are the point

  static Jet2 variable(double value, int axis) {
    Jet2 j(value);
    j.d[axis] = 1.0;
    return j;
  }

  Jet2& operator+=(const Jet2& o) {
    v += o.v;
    d += o.d;
    h += o.h;
    return *this;
  }
  Jet2& operator-=(const Jet2& o) {
    v -= o.v;
    d -= o.d;
    h -= o.h;
    return *this;
  }
  Jet2& operator*=(const Jet2& o) {
    h = h * o.v + d * o.d.transpose() + o.d * d.transpose() + v * o.h;
    d = d * o.v + v * o.d;
    v *= o.v;
    return *this;
  }
  Jet2& operator/=(const Jet2& o) { return *this *= reciprocal(o); }

  friend Jet2 reciprocal(const Jet2& x) {
    // chain rule with f(v) = 1/v
    const double f0 = 1.0 / x.v;
    return chain(x, f0, -f0 * f0, 2.0 * f0 * f0 * f0);
  }

  /// Apply a scalar function with f(v), f'(v), f''(v) supplied.
  friend Jet2 chain(const Jet2& x, double f0, double f1, double f2) {
    Jet2 r;
    r.v = f0;
    r.d = f1 * x.d;
    r.h = f1 * x.h + f2 * x.d * x.d.transpose();
    return r;
  }

  friend Jet2 operator-(const Jet2& x) {
    Jet2 r;
    r.v = -x.v;
    r.d = -x.d;
    r.h = -x.h;
    return r;
  }
  friend Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
  friend Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }
  friend Jet2 operator*(Jet2 a, const Jet2& b) { return a *= b; }
  friend Jet2 operator/(Jet2 a, const Jet2& b) { return a /= b; }
  friend Jet2 operator+(Jet2 a, double b) { a.v += b; return a; }
  friend Jet2 operator+(double b, Jet2 a) { a.v += b; return a; }
  friend Jet2 operator-(Jet2 a, double b) { a.v -= b; return a; }
  friend Jet2 operator-(double b, const Jet2& a) { return Jet2(b) - a; }
  friend Jet2 operator*(Jet2 a, double b) {
    a.v *= b;
    a.d *= b;
    a.h *= b;
    return a;
  }
  friend Jet2 operator*(double b, Jet2 a) { return a * b; }
  friend Jet2 operator/(Jet2 a, double b) { return a * (1.0 / b); }
  friend Jet2 operator/(double b, const Jet2& a) { return b * reciprocal(a); }

  friend Jet2 sqrt(const Jet2& x) {
    const double s = std::sqrt(x.v);
    return chain(x, s, 0.5 / s, -0.25 / (s * x.v));
  }
  friend Jet2 log(const Jet2& x) { return chain(x, std::log(x.v), 1.0 / x.v, -1.0 / (x.v * x.v)); }
  friend Jet2 exp(const Jet2& x) {
    const double e = std::exp(x.v);
    return chain(x, e, e, e);
  }
  friend Jet2 sin(const Jet2& x) {
    const double s = std::sin(x.v), c = std::cos(x.v);
    return chain(x, s, c, -s);
  }
  friend Jet2 cos(const Jet2& x) {
    const double s = std::sin(x.v), c = std::cos(x.v);
    return chain(x, c, -s, -c);
  }
  friend Jet2 pow(const Jet2& x, double p) {
    const double f0 = std::pow(x.v, p);
    return chain(x, f0, p * std::pow(x.v, p - 1.0), p * (p - 1.0) * std::pow(x.v, p - 2.0));
  }
};

/// Seed the coordinates of a chart point as independent jet variables.
template <int N> std::array<Jet2<N>, N> seed(const ChartPoint<N>& p) {
  std::array<Jet2<N>, N> x;
  for (int i = 0; i < N; ++i) x[static_cast<std::size_t>(i)] = Jet2<N>::variable(p.x[static_cast<std::size_t>(i)], i);
  return x;
}

}  // namespace emk
