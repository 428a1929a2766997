#pragma once

// Dense univariate polynomials over an arbitrary coefficient ring.
// Rational coefficients give exact arithmetic; every double converts to a
// rational exactly, so exact identities can be checked for any float input.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

namespace emk {

using Rational = boost::multiprecision::cpp_rational;

template <class C> class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<C> coeffs) : c_(std::move(coeffs)) { trim(); }
  Polynomial(std::initializer_list<C> coeffs) : c_(coeffs) { trim(); }

  static Polynomial constant(C v) { return Polynomial(std::vector<C>{std::move(v)}); }
  static Polynomial monomial(int n, C coeff = C(1)) {
    std::vector<C> c(static_cast<std::size_t>(n) + 1, C(0));
    c.back() = std::move(coeff);
    return Polynomial(std::move(c));
  }

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }

  C coeff(int k) const {
    return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[static_cast<std::size_t>(k)] : C(0);
  }
  const std::vector<C>& coeffs() const { return c_; }

  template <class X> X operator()(const X& x) const {
    X acc = X(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + X(*it);
    return acc;
  }

  Polynomial derivative() const {
    std::vector<C> d;
    for (std::size_t k = 1; k < c_.size(); ++k) d.push_back(c_[k] * C(static_cast<long>(k)));
    return Polynomial(std::move(d));
  }

  template <class D> Polynomial<D> cast() const {
    std::vector<D> d;
    d.reserve(c_.size());
    for (const C& v : c_) d.push_back(static_cast<D>(v));
    return Polynomial<D>(std::move(d));
  }

  friend Polynomial operator+(const Polynomial& p, const Polynomial& q) {
    std::vector<C> r(std::max(p.c_.size(), q.c_.size()), C(0));
    for (std::size_t k = 0; k < p.c_.size(); ++k) r[k] += p.c_[k];
    for (std::size_t k = 0; k < q.c_.size(); ++k) r[k] += q.c_[k];
    return Polynomial(std::move(r));
  }
  friend Polynomial operator-(const Polynomial& p) {
    std::vector<C> r = p.c_;
    for (C& v : r) v = -v;
    return Polynomial(std::move(r));
  }
  friend Polynomial operator-(const Polynomial& p, const Polynomial& q) { return p + (-q); }
  friend Polynomial operator*(const Polynomial& p, const Polynomial& q) {
    if (p.is_zero() || q.is_zero()) return {};
    std::vector<C> r(p.c_.size() + q.c_.size() - 1, C(0));
    for (std::size_t i = 0; i < p.c_.size(); ++i)
      for (std::size_t j = 0; j < q.c_.size(); ++j) r[i + j] += p.c_[i] * q.c_[j];
    return Polynomial(std::move(r));
  }
  friend Polynomial operator*(const C& s, const Polynomial& p) { return constant(s) * p; }
  friend bool operator==(const Polynomial& p, const Polynomial& q) { return p.c_ == q.c_; }

  std::string str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int k = degree(); k >= 0; --k) {
      const C& v = c_[static_cast<std::size_t>(k)];
      if (v == C(0)) continue;
      os << (first ? "" : " + ") << "(" << v << ")";
      if (k > 0) os << " t^" << k;
      first = false;
    }
    return os.str();
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == C(0)) c_.pop_back();
  }
  std::vector<C> c_;  // c_[k] multiplies t^k
};

/// L[y] = t^2 y'' - 6 t y' + 12 y, the linear operator of the constant
/// scalar curvature ODE. Acts on monomials by t^n -> (n-3)(n-4) t^n.
template <class C> Polynomial<C> ode_operator(const Polynomial<C>& y) {
  const Polynomial<C> t = Polynomial<C>::monomial(1);
  const Polynomial<C> t2 = Polynomial<C>::monomial(2);
  const Polynomial<C> d1 = y.derivative();
  return t2 * d1.derivative() - C(6) * (t * d1) + C(12) * y;
}

}  // namespace emk
