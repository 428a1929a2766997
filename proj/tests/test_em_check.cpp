#include "emk/corpus.hpp"
#include "emk/em_check.hpp"
#include "emk/quartic_family.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>

using namespace emk;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const ProductChart& chart12() {
  static const ProductChart ch = build_chart(FamilyParams::make(1.0, 2.0));
  return ch;
}

// h + eps t C with C a fixed symmetric matrix; F is left unchanged.
EMConfig perturbed_config(double eps) {
  Mat<4> c = Mat<4>::Zero();
  c(0, 0) = 0.3;
  c(2, 2) = -0.5;
  c(0, 2) = c(2, 0) = 0.2;
  c(1, 1) = 0.4;
  const MetricOracle<4> h = chart12().h;
  EMConfig cfg = chart12().em_config();
  cfg.metric = MetricOracle<4>(
      [h, c, eps](const ChartPoint<4>& p) {
        MetricJet<4> j = h.jet(p);
        j.g += eps * p[0] * c;
        j.dg[0] += eps * c;
        return j;
      },
      h.domain());
  cfg.conformal.reset();
  return cfg;
}

GridSpec small_grid() {
  GridSpec g;
  g.counts = {6, 2, 6, 2};
  return g;
}

}  // namespace

TEST_CASE("harmonicity of the family and of simple fields") {
  const EMConfig cfg = chart12().em_config();
  const ChartPoint<4> p{{1.45, 2.0, -0.07, 4.0}};
  const auto [closed, coclosed] = residual_harmonic(cfg, p);
  CHECK(closed < 1e-5);
  CHECK(coclosed < 1e-5);

  EMConfig w = cfg;
  w.maxwell = constant_form_field(chart12().kahler, chart12().domain);
  const auto [wc, wcc] = residual_harmonic(w, p);
  CHECK(wc == 0.0);
  CHECK(wcc < 1e-7);

  EMConfig bad = cfg;
  bad.metric = chart12().g;
  bad.maxwell = TwoFormField([](const ChartPoint<4>& q) { return q[0] * TwoForm::basis(2, 3); }, chart12().domain);
  // |dt^du^dtheta2|_g = sqrt(g^tt g^uu g^theta2theta2) = sqrt(Psi)
  const double expect = std::sqrt((*chart12().profile)(p[0]));
  CHECK_THAT(residual_harmonic(bad, p).first, WithinRel(expect, 1e-8));
  bad.metric = flat_metric<4>(chart12().domain);
  CHECK_THAT(residual_harmonic(bad, p).first, WithinAbs(1.0, 1e-9));
}

TEST_CASE("energy and matter residuals on the family") {
  Rng rng(31);
  const EMConfig cfg = chart12().em_config();
  for (const ChartPoint<4>& p : interior_points(chart12().domain, rng, 20)) {
    const double e = residual_energy(cfg, p), m = residual_matter(cfg, p);
    CHECK(e < 1e-8);
    CHECK(m < 1e-8);
    CHECK(std::abs(e - m) < 1e-12);
  }
}

TEST_CASE("Einstein products without a field") {
  EMConfig round = sphere_product_config(1.0, 1.0);
  round.maxwell = constant_form_field(TwoForm{}, round.metric.domain());
  const ChartPoint<4> p{{0.3, 1.0, -0.6, 2.0}};
  CHECK(residual_energy(round, p) < 1e-13);
  CHECK(residual_matter(round, p) < 1e-13);

  // unequal radii: |r0| = |s1 - s2| / 2
  EMConfig unequal = sphere_product_config(0.8, 1.3);
  unequal.maxwell = constant_form_field(TwoForm{}, unequal.metric.domain());
  const ChartPoint<4> q{{0.1, 1.0, -0.6, 2.0}};
  const double s1 = 2.0 / 0.64, s2 = 2.0 / 1.69;
  CHECK_THAT(residual_energy(unequal, q), WithinRel(std::abs(s1 - s2) / 2.0, 1e-12));

  // anti-self-dual field on an Einstein metric
  EMConfig asd = sphere_product_config(1.0, 1.0);
  const TwoForm minus = TwoForm::basis(0, 1) - TwoForm::basis(2, 3);
  asd.maxwell = constant_form_field(minus, asd.metric.domain());
  CHECK(residual_matter(asd, p) < 1e-13);
}

TEST_CASE("cscK sphere products solve the system") {
  for (const auto& [r1, r2] : {std::pair{1.0, 1.0}, std::pair{0.8, 1.3}}) {
    const EMConfig cfg = sphere_product_config(r1, r2);
    const ResidualReport rep = verify(cfg, small_grid(), Tolerances{}, 2);
    INFO("radii " << r1 << ", " << r2);
    CHECK(rep.pass());
    CHECK(rep.scalar_spread < 1e-12);
    CHECK_THAT(rep.scalar_median, WithinRel(2.0 / (r1 * r1) + 2.0 / (r2 * r2), 1e-13));
  }
  // F- = (1/4)(1/R1^2 - 1/R2^2)(w1 - w2) for the unequal product
  const EMConfig cfg = sphere_product_config(0.8, 1.3);
  const ChartPoint<4> p{{0.2, 1.0, 0.5, 3.0}};
  const SelfDualSplit s = sd_asd_split(cfg.metric.metric(p), {}, cfg.maxwell(p));
  const double k = 0.25 * (1.0 / 0.64 - 1.0 / 1.69);
  CHECK_THAT(s.minus(0, 1), WithinAbs(k, 1e-12));
  CHECK_THAT(s.minus(2, 3), WithinAbs(-k, 1e-12));
}

TEST_CASE("perturbations break the equations linearly") {
  const ChartPoint<4> p{{1.3, 1.0, 0.04, 2.0}};
  const double r1 = residual_matter(perturbed_config(1e-4), p), r2 = residual_matter(perturbed_config(2e-4), p);
  CHECK(r1 > 1e-6);
  CHECK_THAT(r2 / r1, WithinAbs(2.0, 1e-3));
}

TEST_CASE("scalar curvature constancy") {
  const std::vector<ChartPoint<4>> pts = small_grid().points(chart12().domain);
  const ScalarConstancy s = residual_scalar_const(chart12().em_config(), pts);
  CHECK_THAT(s.median, WithinAbs(24.0, 1e-9));
  CHECK(s.spread < 1e-8 * 24.0);
  CHECK(residual_scalar_const(sphere_product_config(1.0, 0.6), small_grid().points(sphere_product_config(1.0, 0.6).metric.domain())).spread <
        1e-12);
  CHECK(residual_scalar_const(perturbed_config(1e-3), pts).spread > 1e-5);
}

TEST_CASE("Leibniz identity") {
  Rng rng(41);
  const MetricOracle<4> g = random_perturbed_metric(rng);
  for (int k = 0; k < 10; ++k)
    CHECK(leibniz_residual(PolynomialFormField::random(rng).field(), g, {}, random_point(rng)) < 1e-7);

  const TwoFormField c = constant_form_field(random_form(rng), corpus_domain());
  CHECK(leibniz_residual(c, flat_metric<4>(corpus_domain()), {}, random_point(rng)) < 1e-10);

  // purely self-dual field: both sides vanish
  const TwoFormField base = PolynomialFormField::random(rng).field();
  const TwoFormField plus([base, g](const ChartPoint<4>& q) { return sd_asd_split(g.metric(q), {}, base(q)).plus; }, corpus_domain());
  CHECK(leibniz_residual(plus, g, {}, random_point(rng)) < 1e-9);

  Conventions flipped;
  flipped.flip_codifferential_sign = true;
  CHECK(leibniz_residual(PolynomialFormField::random(rng).field(), g, {}, random_point(rng), flipped) > 1e-3);
}

TEST_CASE("conformal change of the trace-free Ricci tensor") {
  const ChartPoint<4> p{{1.55, 0.5, -0.11, 2.0}};
  CHECK(conformal_ricci_residual<4>(chart12().g, constant_scalar_field<4>(2.5), p) < 1e-12);
  CHECK(conformal_ricci_residual<4>(chart12().g, chart12().potential, p) < 1e-7);
  const MetricOracle<4> spheres = sphere_product_config(1.0, 0.7).metric;
  const ScalarField<4> f = dual_scalar_field<4>([](const auto& x) { return 2.0 + x[0] * x[2] + 0.3 * x[0] * x[0] - 0.1 * x[2]; });
  const ChartPoint<4> q{{0.4, 1.0, -0.2, 1.0}};
  CHECK(conformal_ricci_residual<4>(spheres, f, q) < 1e-7);
  CHECK_THROWS_AS(conformal_ricci_residual<4>(spheres, constant_scalar_field<4>(0.0), q), NonPositivePotential);
}

TEST_CASE("holomorphy potentials") {
  const ChartPoint<4> p{{1.35, 0.5, 0.09, 2.0}};
  const AlmostComplexStructure J = chart12().complex_structure(p);
  CHECK(holomorphy_residual(chart12().g, J, chart12().potential, p) < 1e-9);
  // Hess(t^2) = 2t Hess t + 2 dt dt; the dt dt part is not J-invariant and
  // leaves |2(dt dt - Jdt Jdt)| = 2 sqrt(2) Psi.
  const ScalarField<4> t2 = dual_scalar_field<4>([](const auto& x) { return x[0] * x[0]; });
  CHECK_THAT(holomorphy_residual(chart12().g, J, t2, p), WithinRel(2.0 * std::sqrt(2.0) * (*chart12().profile)(p[0]), 1e-12));
  const ScalarField<4> angular = dual_scalar_field<4>([](const auto& x) { return sin(x[1]) * x[0]; });
  CHECK(holomorphy_residual(chart12().g, J, angular, p) > 1e-3);
}

TEST_CASE("potential recovery") {
  const EMConfig cfg = chart12().em_config();
  const ChartPoint<4> p{{1.5, 3.0, 0.0, 1.0}};
  CHECK_THAT(recover_potential(cfg.maxwell, cfg.metric, cfg.orientation, p), WithinAbs(1.5, 1e-9));
  const TwoFormField scaled([cfg](const ChartPoint<4>& q) { return 9.0 * cfg.maxwell(q); }, cfg.maxwell.domain());
  CHECK_THAT(recover_potential(scaled, cfg.metric, cfg.orientation, p), WithinAbs(3.0 * 1.5, 1e-9));
  const TwoFormField minus = constant_form_field(TwoForm::basis(0, 1) - TwoForm::basis(2, 3), chart12().domain);
  CHECK_THROWS_AS(recover_potential(minus, chart12().g, {}, p), ZeroSelfDualPart);
}

TEST_CASE("Maxwell field of the family") {
  Rng rng(8);
  double max_minus = 0.0;
  for (const ChartPoint<4>& p : interior_points(chart12().domain, rng, 10)) {
    const FormMetric hm(chart12().h.metric(p));
    const SelfDualSplit s = sd_asd_split(hm, chart12().orientation, maxwell_field(chart12(), p));
    CHECK((s.plus - chart12().kahler).max_abs() < 1e-10);
    CHECK_THAT(form_norm(s.plus, inverse_metric<4>(chart12().g.metric(p))), WithinAbs(std::sqrt(2.0), 1e-12));
    max_minus = std::max(max_minus, form_norm(s.minus, hm.ginv));
  }
  CHECK(max_minus > 0.1);
}

TEST_CASE("verify reports") {
  const ResidualReport rep = verify(chart12().em_config(), small_grid(), Tolerances{}, 3);
  CHECK(rep.pass());
  CHECK(rep.failing().empty());
  CHECK_THAT(rep.scalar_median, WithinAbs(24.0, 1e-9));
  for (const char* name : {"closed", "coclosed", "self_dual_closed", "energy", "matter", "energy_matter_agreement", "scalar_constant",
                           "potential_recovery", "holomorphy", "conformal_ricci", "killing", "isotropy"}) {
    INFO(name);
    REQUIRE(rep.find(name) != nullptr);
    CHECK(rep.find(name)->count == small_grid().size());
  }

  const ResidualReport bad = verify(perturbed_config(1e-3), small_grid(), Tolerances{}, 3);
  CHECK_FALSE(bad.pass());
  const std::vector<std::string> failing = bad.failing();
  CHECK(std::find(failing.begin(), failing.end(), "matter") != failing.end());
  CHECK(std::find(failing.begin(), failing.end(), "energy") != failing.end());
  CHECK(std::find(failing.begin(), failing.end(), "scalar_constant") != failing.end());
}

TEST_CASE("verify is independent of the thread count") {
  const EMConfig cfg = chart12().em_config();
  const ResidualReport a = verify(cfg, small_grid(), Tolerances{}, 1), b = verify(cfg, small_grid(), Tolerances{}, 4);
  REQUIRE(a.lines.size() == b.lines.size());
  for (std::size_t i = 0; i < a.lines.size(); ++i) {
    CHECK(a.lines[i].max == b.lines[i].max);
    CHECK(a.lines[i].mean == b.lines[i].mean);
  }
}

TEST_CASE("errors carry the grid point") {
  EMConfig cfg = chart12().em_config();
  cfg.maxwell = TwoFormField([](const ChartPoint<4>& p) -> TwoForm { throw NotJInvariant("forced at " + p.str()); }, chart12().domain);
  try {
    (void)verify(cfg, small_grid(), Tolerances{}, 2);
    FAIL("verify did not throw");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("grid point") != std::string::npos);
  }
}
