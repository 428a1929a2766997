#include "emk/polynomial.hpp"
#include "emk/quadrature.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace emk;
using P = Polynomial<Rational>;

TEST_CASE("polynomial arithmetic") {
  const P p{Rational(1), Rational(-2), Rational(3)};  // 1 - 2t + 3t^2
  const P q{Rational(0), Rational(1)};
  CHECK(p.degree() == 2);
  CHECK(p(Rational(2)) == Rational(9));
  CHECK((p * q).coeff(3) == Rational(3));
  CHECK((p - p).is_zero());
  CHECK(p.derivative() == P{Rational(-2), Rational(6)});
  CHECK((p + q).coeff(1) == Rational(-1));
  CHECK(p.cast<double>()(0.5) == 0.75);
  CHECK(P::monomial(4).coeff(4) == Rational(1));
}

TEST_CASE("ODE operator on monomials") {
  CHECK(ode_operator(P::constant(Rational(1))) == P::constant(Rational(12)));
  CHECK(ode_operator(P::monomial(2)) == P::monomial(2, Rational(2)));
  CHECK(ode_operator(P::monomial(3)).is_zero());
  CHECK(ode_operator(P::monomial(4)).is_zero());
  for (int n = 0; n <= 9; ++n) CHECK(ode_operator(P::monomial(n)) == P::monomial(n, Rational((n - 3) * (n - 4))));
  CHECK(ode_operator(P::monomial(1)) == P::monomial(1, Rational(6)));
}

TEST_CASE("compensated summation") {
  CompensatedSum s;
  s.add(1.0);
  for (int k = 0; k < 10; ++k) s.add(1e-16);
  s.add(-1.0);
  CHECK(std::abs(s.value() - 1e-15) < 1e-30);
}

TEST_CASE("Gauss-Legendre quadrature") {
  CHECK(std::abs(integrate([](double x) { return std::pow(x, 7) - x * x; }, -1.0, 2.0, 1) - (255.0 / 8.0 - 3.0)) < 1e-12);
  CHECK(std::abs(integrate([](double x) { return std::sin(x); }, 0.0, 3.14159265358979323846, 4) - 2.0) < 1e-14);
  CHECK(std::abs(integrate2([](double x, double y) { return x * y * y; }, 0.0, 1.0, 0.0, 3.0, 1, 1) - 4.5) < 1e-13);
}
