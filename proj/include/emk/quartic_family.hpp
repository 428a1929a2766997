#pragma once

// Conformally Kahler Einstein-Maxwell metrics on CP1 x CP1.
//
// For 0 < a < b the first factor is dt^2/Psi + Psi dtheta^2 on (a, b) with
//   Psi(t) = (t-a)(t-b)/(a-b) * [2 - (t-a)(t-b)/(ab)],
// the second factor is a round sphere of scalar curvature c written as
// du^2/Psi2 + Psi2 dtheta2^2 with Psi2(u) = R^2 - u^2/R^2, R^2 = 2/c, and
// h = t^-2 (g1 + g2) has constant scalar curvature d = 12ab/(b-a).

#include "emk/core.hpp"
#include "emk/curvature.hpp"
#include "emk/em_check.hpp"
#include "emk/forms.hpp"
#include "emk/metric.hpp"
#include "emk/polynomial.hpp"
#include "emk/quadrature.hpp"

#include <memory>
#include <vector>

namespace emk {

struct FamilyParams {
  double a = 1.0;
  double b = 2.0;

  static FamilyParams make(double a, double b) {
    if (!(std::isfinite(a) && std::isfinite(b) && a > 0.0 && b > a)) throw InvalidParams("require 0 < a < b");
    return {a, b};
  }

  static FamilyParams from_ratio(double ratio) { return make(1.0, ratio); }
};

inline void validate(const FamilyParams& p) { (void)FamilyParams::make(p.a, p.b); }

/// The quartic, both exact and as doubles.
class QuarticProfile {
 public:
  explicit QuarticProfile(const FamilyParams& p) : QuarticProfile(Rational(p.a), Rational(p.b)) { validate(p); }

  QuarticProfile(const Rational& a, const Rational& b) {
    if (!(a > 0 && b > a)) throw InvalidParams("require 0 < a < b");
    using P = Polynomial<Rational>;
    const P q = P{-a, Rational(1)} * P{-b, Rational(1)};  // (t-a)(t-b)
    exact_ = (Rational(1) / (a - b)) * q * (P::constant(Rational(2)) - (Rational(1) / (a * b)) * q);
    for (int k = 0; k < 4; ++k) {
      const P& src = k == 0 ? exact_ : derivs_exact_[static_cast<std::size_t>(k - 1)];
      derivs_exact_[static_cast<std::size_t>(k)] = src.derivative();
    }
    value_ = exact_.cast<double>();
    for (std::size_t k = 0; k < 4; ++k) derivs_[k] = derivs_exact_[k].cast<double>();
  }

  const Polynomial<Rational>& exact() const { return exact_; }
  /// k-th derivative, k = 0..4.
  const Polynomial<Rational>& exact_derivative(int k) const {
    return k == 0 ? exact_ : derivs_exact_[static_cast<std::size_t>(k - 1)];
  }

  double operator()(double t) const { return value_(t); }
  double derivative(int k, double t) const { return k == 0 ? value_(t) : derivs_[static_cast<std::size_t>(k - 1)](t); }

  /// Coefficients of A t^4 + B t^3 + (c/2) t^2 + 0 t - d/12.
  Rational A() const { return exact_.coeff(4); }
  Rational B() const { return exact_.coeff(3); }

 private:
  Polynomial<Rational> exact_;
  std::array<Polynomial<Rational>, 4> derivs_exact_;
  Polynomial<double> value_;
  std::array<Polynomial<double>, 4> derivs_;
};

inline QuarticProfile quartic_profile(const FamilyParams& p) { return QuarticProfile(p); }

struct FamilyConstants {
  double c = 0.0;           // scalar curvature of the second factor
  double d = 0.0;           // scalar curvature of h
  double area_sigma = 0.0;  // area of the second factor
  double area_first = 0.0;  // area of the first factor
  double radius = 0.0;      // R = sqrt(2/c)
  double kclass_first = 0.0;   // [w] on the first-factor class
  double kclass_second = 0.0;  // [w] on the second-factor class
  // The same constants read off the profile: d = -12 Psi(0), c = Psi''(0).
  double d_from_profile = 0.0;
  double c_from_profile = 0.0;
};

struct ExactConstants {
  Rational c;
  Rational d;
};

/// c = Psi''(0) and d = -12 Psi(0) in exact arithmetic.
inline ExactConstants exact_constants(const QuarticProfile& psi) {
  return {psi.exact_derivative(2)(Rational(0)), Rational(-12) * psi.exact()(Rational(0))};
}

inline FamilyConstants family_constants(const FamilyParams& p) {
  validate(p);
  const double a = p.a, b = p.b;
  FamilyConstants k;
  k.d = 12.0 * a * b / (b - a);
  k.c = 2.0 * (a + b) * (a + b) / ((b - a) * a * b);
  k.area_sigma = 4.0 * kPi * (b - a) * a * b / ((a + b) * (a + b));
  // theta has period 2 pi (smooth closure with Psi'(a) = -Psi'(b) = 2), so
  // the first factor has area 2 pi (b - a).
  k.area_first = 2.0 * kPi * (b - a);
  k.radius = std::sqrt(2.0 / k.c);
  const double r = b / a;
  k.kclass_first = k.area_first;
  k.kclass_second = 4.0 * kPi * (b - a) * r / ((1.0 + r) * (1.0 + r));
  const QuarticProfile psi(p);
  k.d_from_profile = -12.0 * psi(0.0);
  k.c_from_profile = psi.derivative(2, 0.0);
  return k;
}

/// The product chart with its metrics, forms and fields.
struct ProductChart {
  FamilyParams params;
  std::shared_ptr<const QuarticProfile> profile;
  FamilyConstants constants;
  Domain<4> domain;
  MetricOracle<2> first;   // g1 in (t, theta)
  MetricOracle<2> second;  // g2 in (u, theta2)
  MetricOracle<4> g;
  MetricOracle<4> h;
  ScalarField<4> potential;  // f = t
  TwoForm kahler;            // dt^dtheta + du^dtheta2
  TwoFormField maxwell;      // F with F+ = w with respect to h
  Orientation orientation{};  // dt^dtheta^du^dtheta2 > 0

  double psi2(double u) const {
    const double r2 = constants.radius * constants.radius;
    return r2 - u * u / r2;
  }

  AlmostComplexStructure complex_structure(const ChartPoint<4>& p) const {
    return AlmostComplexStructure::from_kahler_form(inverse_metric<4>(g.metric(p)), kahler);
  }

  EMConfig em_config() const {
    EMConfig cfg;
    cfg.metric = h;
    cfg.maxwell = maxwell;
    cfg.orientation = orientation;
    cfg.conformal = ConformalData{g, potential, kahler};
    cfg.isotropic_axes = {1, 3};
    return cfg;
  }
};

inline ProductChart build_chart(const FamilyParams& params) {
  validate(params);
  ProductChart ch;
  ch.params = params;
  ch.profile = std::make_shared<const QuarticProfile>(params);
  ch.constants = family_constants(params);

  Domain<2> d1;
  d1.lower = {params.a, 0.0};
  d1.upper = {params.b, 2.0 * kPi};
  d1.periodic = {false, true};
  auto psi = ch.profile;
  ch.first = darboux_surface(
      [psi](double t) { return std::array<double, 3>{(*psi)(t), psi->derivative(1, t), psi->derivative(2, t)}; }, d1);
  ch.second = round_sphere_darboux(ch.constants.radius);
  ch.g = product_metric(ch.first, ch.second);
  ch.domain = ch.g.domain();
  ch.potential = coordinate_field<4>(0);
  ch.h = conformal_metric<4>(ch.g, ch.potential);
  ch.kahler = TwoForm::basis(0, 1) + TwoForm::basis(2, 3);
  ch.maxwell = strongly_hermitian_field(ch.g, ch.kahler, ch.potential);
  return ch;
}

/// Maxwell field of the chart at one point.
inline TwoForm maxwell_field(const ProductChart& chart, const ChartPoint<4>& p) { return chart.maxwell(p); }

namespace detail {

// Panels are spaced so the t-integrands (powers of t, curvature of h) are
// resolved even when b/a is large.
inline double integrate_t(const std::function<double(double)>& f, double a, double b) {
  const double ratio = b / a;
  const int panels = std::clamp(static_cast<int>(8 * std::ceil(std::log2(ratio) + 1.0)), 8, 256);
  // geometric panel boundaries
  CompensatedSum total;
  const double q = std::pow(ratio, 1.0 / panels);
  double lo = a;
  for (int k = 0; k < panels; ++k) {
    const double hi = k + 1 == panels ? b : lo * q;
    total.add(integrate(f, lo, hi, 1));
    lo = hi;
  }
  return total.value();
}

}  // namespace detail

struct FunctionalValues {
  double volume = 0.0;              // Vol(h)
  double total_scalar = 0.0;        // int s_h dmu_h
  double total_scalar_squared = 0.0;  // int s_h^2 dmu_h
};

/// Quadrature of the volume, total scalar curvature and Calabi integrand of
/// h over the chart, with s_h and sqrt(det h) taken from the curvature
/// pipeline at each node. Angles contribute exact 2 pi factors.
inline FunctionalValues functional_quadrature(const ProductChart& chart) {
  const double r2 = chart.constants.radius * chart.constants.radius;
  auto over_u = [&](double t, int moment) {
    return integrate(
        [&](double u) {
          const CurvatureBundle<4> cb = curvature<4>(chart.h, ChartPoint<4>{{t, kPi, u, kPi}});
          return cb.volume_density * (moment == 0 ? 1.0 : moment == 1 ? cb.scalar : cb.scalar * cb.scalar);
        },
        -r2, r2, 2);
  };
  const double ang = 4.0 * kPi * kPi;
  FunctionalValues v;
  v.volume = ang * detail::integrate_t([&](double t) { return over_u(t, 0); }, chart.params.a, chart.params.b);
  v.total_scalar = ang * detail::integrate_t([&](double t) { return over_u(t, 1); }, chart.params.a, chart.params.b);
  v.total_scalar_squared = ang * detail::integrate_t([&](double t) { return over_u(t, 2); }, chart.params.a, chart.params.b);
  return v;
}

/// Vol(h) = 2 pi (a^-3 - b^-3)/3 * area_sigma
inline double volume_closed_form(const FamilyParams& p) {
  const FamilyConstants k = family_constants(p);
  return 2.0 * kPi * (1.0 / (p.a * p.a * p.a) - 1.0 / (p.b * p.b * p.b)) / 3.0 * k.area_sigma;
}

/// s_h V^(1/2) = 8 pi sqrt(6(a^2+ab+b^2)) / (a+b)
inline double yamabe_closed_form(const FamilyParams& p) {
  validate(p);
  return 8.0 * kPi * std::sqrt(6.0 * (p.a * p.a + p.a * p.b + p.b * p.b)) / (p.a + p.b);
}

struct YamabeValue {
  double closed_form = 0.0;
  double quadrature = 0.0;  // int s dmu / sqrt(int dmu)
};

inline YamabeValue yamabe_value(const FamilyParams& p) {
  const ProductChart chart = build_chart(p);
  const FunctionalValues v = functional_quadrature(chart);
  return {yamabe_closed_form(p), v.total_scalar / std::sqrt(v.volume)};
}

struct CalabiValue {
  double closed_form = 0.0;  // d^2 Vol(h)
  double quadrature = 0.0;   // int s^2 dmu
};

inline CalabiValue calabi_value(const FamilyParams& p) {
  const ProductChart chart = build_chart(p);
  const FunctionalValues v = functional_quadrature(chart);
  const double d = chart.constants.d;
  return {d * d * volume_closed_form(p), v.total_scalar_squared};
}

struct GaussBonnet {
  double first = 0.0;   // int s1 dmu1
  double second = 0.0;  // int s2 dmu2
};

/// Total curvature of each factor by quadrature through the surface
/// curvature pipeline.
inline GaussBonnet gauss_bonnet_check(const FamilyParams& p) {
  const ProductChart chart = build_chart(p);
  auto density = [](const MetricOracle<2>& m, double x) {
    const CurvatureBundle<2> cb = curvature<2>(m, ChartPoint<2>{{x, kPi}});
    return cb.scalar * cb.volume_density;
  };
  const double r2 = chart.constants.radius * chart.constants.radius;
  GaussBonnet gb;
  gb.first = 2.0 * kPi * integrate([&](double t) { return density(chart.first, t); }, p.a, p.b, 4);
  gb.second = 2.0 * kPi * integrate([&](double u) { return density(chart.second, u); }, -r2, r2, 4);
  return gb;
}

struct FactorAreas {
  double first = 0.0;
  double second = 0.0;
};

inline FactorAreas area_quadrature(const FamilyParams& p) {
  const ProductChart chart = build_chart(p);
  auto dens = [](const MetricOracle<2>& m, double x) { return std::sqrt(m.metric(ChartPoint<2>{{x, kPi}}).determinant()); };
  const double r2 = chart.constants.radius * chart.constants.radius;
  return {2.0 * kPi * integrate([&](double t) { return dens(chart.first, t); }, p.a, p.b, 4),
          2.0 * kPi * integrate([&](double u) { return dens(chart.second, u); }, -r2, r2, 4)};
}

struct SweepRow {
  double ratio = 0.0;
  double d = 0.0;
  double c = 0.0;
  double area_sigma = 0.0;
  double area_first = 0.0;
  double yamabe = 0.0;
  double calabi = 0.0;
  double max_residual = 0.0;
};

struct SweepTable {
  std::vector<SweepRow> rows;
  bool yamabe_increasing = false;
};

/// Geometrically spaced ratios b/a in [lo, hi] with a = 1.
inline std::vector<double> sweep_ratios(double lo, double hi, int steps) {
  if (!(lo > 1.0) || !(hi >= lo) || !std::isfinite(hi)) throw InvalidParams("ratio range must lie in (1, inf) with min <= max");
  if (steps < 1) throw InvalidParams("sweep needs at least one step");
  if (steps == 1) return {lo};
  if (steps >= 2 && !(hi > lo)) throw InvalidParams("ratio range is empty");
  std::vector<double> r;
  r.reserve(static_cast<std::size_t>(steps));
  for (int k = 0; k < steps; ++k) r.push_back(k + 1 == steps ? hi : lo * std::pow(hi / lo, static_cast<double>(k) / (steps - 1)));
  return r;
}

/// Largest of the closed, co-closed and matter residual maxima on a grid.
inline double max_em_residual(const ProductChart& chart, const GridSpec& grid) {
  const ResidualReport rep = verify(chart.em_config(), grid, Tolerances{}, 1);
  double m = 0.0;
  for (const char* name : {"closed", "coclosed", "matter"}) m = std::max(m, rep.find(name)->max);
  return m;
}

inline SweepTable sweep(const std::vector<double>& ratios, const GridSpec& residual_grid, unsigned threads = 1) {
  SweepTable tab;
  tab.rows.resize(ratios.size());
  parallel_for(ratios.size(), threads, [&](std::size_t i) {
    const FamilyParams p = FamilyParams::from_ratio(ratios[i]);
    const FamilyConstants k = family_constants(p);
    SweepRow& row = tab.rows[i];
    row.ratio = ratios[i];
    row.d = k.d;
    row.c = k.c;
    row.area_sigma = k.area_sigma;
    row.area_first = k.area_first;
    row.yamabe = yamabe_closed_form(p);
    row.calabi = row.yamabe * row.yamabe;
    row.max_residual = max_em_residual(build_chart(p), residual_grid);
  });
  tab.yamabe_increasing = true;
  for (std::size_t i = 1; i < tab.rows.size(); ++i)
    if (!(tab.rows[i].yamabe > tab.rows[i - 1].yamabe)) tab.yamabe_increasing = false;
  return tab;
}

}  // namespace emk
