#pragma once

// Residual verification of the Einstein-Maxwell system
//   dF = 0,   d*F = 0,   [r + F o F]_0 = 0
// and of its reformulation dF+ = 0, s = const, r0 = -2 F+ o F-.
// All tensor norms are taken with respect to the physical metric h.

#include "emk/core.hpp"
#include "emk/curvature.hpp"
#include "emk/forms.hpp"
#include "emk/metric.hpp"
#include "emk/parallel.hpp"
#include "emk/report.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace emk {

/// A Kahler metric g, its Kahler form (constant chart components) and a
/// positive potential f with h = f^-2 g.
struct ConformalData {
  MetricOracle<4> kahler_metric;
  ScalarField<4> potential;
  TwoForm kahler_form;
};

struct EMConfig {
  MetricOracle<4> metric;  // h
  TwoFormField maxwell;    // F
  Orientation orientation{};
  std::optional<ConformalData> conformal;
  /// Axes along which every residual should be invariant (angles).
  std::vector<int> isotropic_axes;
  Conventions conventions{};
};

/// The Maxwell field attached to a Kahler metric g and positive holomorphy
/// potential f: with h = f^-2 g and r0_h = phi(., J.) for an anti-self-dual
/// phi, F = w + 1/2 f^-2 phi. Self-dual part w, F- fixed by r0_h.
inline TwoFormField strongly_hermitian_field(const MetricOracle<4>& g, const TwoForm& kahler, const ScalarField<4>& f,
                                             double jinv_tol = 1e-8) {
  const MetricOracle<4> h = conformal_metric<4>(g, f);
  auto value = [g, h, kahler, f, jinv_tol](const ChartPoint<4>& p) {
    const double fv = f(p).value;
    if (!(fv > 0.0)) throw NonPositivePotential("potential is not positive at " + p.str());
    const CurvatureBundle<4> ch = curvature<4>(h, p);
    const Mat<4> gm = g.metric(p);
    const AlmostComplexStructure J = AlmostComplexStructure::from_kahler_form(inverse_metric<4>(gm), kahler);
    const TwoForm phi = asd_from_jinvariant(gm, J, ch.ricci0, jinv_tol);
    return kahler + (0.5 / (fv * fv)) * phi;
  };
  return TwoFormField(value, h.domain());
}

/// (|dF|_h, |d*F|_h)
inline std::pair<double, double> residual_harmonic(const EMConfig& cfg, const ChartPoint<4>& p) {
  const Mat<4> hinv = inverse_metric<4>(cfg.metric.metric(p));
  const double closed = three_form_norm(exterior_derivative(cfg.maxwell, p), hinv);
  const double coclosed = three_form_norm(exterior_derivative(star_field(cfg.maxwell, cfg.metric, cfg.orientation), p), hinv);
  return {closed, coclosed};
}

/// |[r + F o F]_0|_h
inline double residual_energy(const EMConfig& cfg, const ChartPoint<4>& p) {
  const CurvatureBundle<4> cb = curvature<4>(cfg.metric, p);
  const TwoForm f = cfg.maxwell(p);
  return tensor_norm<4>(trace_free<4>(cb.ricci + compose(f, f, cb.ginv), cb.g, cb.ginv), cb.ginv);
}

/// |r0 + 2 F+ o F-|_h
inline double residual_matter(const EMConfig& cfg, const ChartPoint<4>& p) {
  const CurvatureBundle<4> cb = curvature<4>(cfg.metric, p);
  const SelfDualSplit sp = sd_asd_split(cb.g, cfg.orientation, cfg.maxwell(p));
  return tensor_norm<4>(cb.ricci0 + 2.0 * compose(sp.plus, sp.minus, cb.ginv), cb.ginv);
}

inline double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct ScalarConstancy {
  double median = 0.0;
  double spread = 0.0;  // max |s - median|
};

/// Spread of the scalar curvature of the configuration metric over points.
inline ScalarConstancy residual_scalar_const(const EMConfig& cfg, const std::vector<ChartPoint<4>>& points) {
  std::vector<double> s;
  s.reserve(points.size());
  for (const auto& p : points) s.push_back(curvature<4>(cfg.metric, p).scalar);
  ScalarConstancy out;
  out.median = median(s);
  for (double v : s) out.spread = std::max(out.spread, std::abs(v - out.median));
  return out;
}

/// |div(F+ o F-) - F-(div F+) - F+(div F-)|_g, where the terms read
///   (F(div G))_b = F^a_b (div G)_a = g^ad F_db (div G)_a.
/// The left side uses the covariant divergence of the symmetric tensor
/// F+ o F-; the two-form divergences on the right are -delta F+- through the
/// Hodge route.
inline double leibniz_residual(const TwoFormField& field, const MetricOracle<4>& oracle, Orientation orient, const ChartPoint<4>& p,
                               Conventions conv = {}) {
  const TwoFormField plus(
      [field, oracle, orient](const ChartPoint<4>& q) { return sd_asd_split(oracle.metric(q), orient, field(q)).plus; },
      field.domain(), field.steps());
  const TwoFormField minus(
      [field, oracle, orient](const ChartPoint<4>& q) { return sd_asd_split(oracle.metric(q), orient, field(q)).minus; },
      field.domain(), field.steps());
  const Sym2Field<4> product(
      [field, oracle, orient](const ChartPoint<4>& q) {
        const FormMetric m(oracle.metric(q));
        const SelfDualSplit sp = sd_asd_split(m, orient, field(q));
        return Mat<4>(compose(sp.plus, sp.minus, m.ginv));
      },
      field.domain(), field.steps());

  const Vec<4> lhs = divergence_sym2<4>(product, oracle, p);
  const Vec<4> div_plus = -codifferential(plus, oracle, orient, p, conv);
  const Vec<4> div_minus = -codifferential(minus, oracle, orient, p, conv);
  const Mat<4> ginv = inverse_metric<4>(oracle.metric(p));
  const Vec<4> rhs = minus(p).matrix().transpose() * ginv * div_plus + plus(p).matrix().transpose() * ginv * div_minus;
  return covector_norm<4>(lhs - rhs, ginv);
}

/// |r0_h - r0_g - (n-2) f^-1 Hess0_g f|_h, with r0_h from the jet of h = f^-2 g.
template <int N> double conformal_ricci_residual(const MetricOracle<N>& g, const ScalarField<N>& f, const ChartPoint<N>& p) {
  const ScalarJet<N> fj = f(p);
  if (!(fj.value > 0.0)) throw NonPositivePotential("conformal factor is not positive at " + p.str());
  const CurvatureBundle<N> cg = curvature<N>(g, p);
  const CurvatureBundle<N> ch = curvature<N>(conformal_metric<N>(g, f), p);
  const Mat<N> hess0 = trace_free<N>(hessian<N>(fj, cg.gamma), cg.g, cg.ginv);
  return tensor_norm<N>(ch.ricci0 - cg.ricci0 - ((N - 2.0) / fj.value) * hess0, ch.ginv);
}

/// |Hess f - Hess f(J., J.)|_g
inline double holomorphy_residual(const MetricOracle<4>& g, const AlmostComplexStructure& J, const ScalarField<4>& f,
                                  const ChartPoint<4>& p) {
  const MetricJet<4> jet = g.jet(p);
  const Mat<4> hess = hessian<4>(f(p), christoffel<4>(jet));
  return j_invariance_defect(hess, J, inverse_metric<4>(jet.g));
}

/// 2^(-1/4) |F+|_h^(1/2)
inline double recover_potential(const TwoFormField& field, const MetricOracle<4>& oracle, Orientation orient, const ChartPoint<4>& p) {
  const FormMetric m(oracle.metric(p));
  const double norm = form_norm(sd_asd_split(m, orient, field(p)).plus, m.ginv);
  if (norm < 1e-14) throw ZeroSelfDualPart("self-dual part vanishes at " + p.str());
  return std::pow(2.0, -0.25) * std::sqrt(norm);
}

namespace detail {

using PackedForms = Eigen::Matrix<double, 18, 1>;

inline PackedForms pack(const TwoForm& a, const TwoForm& b, const TwoForm& c) {
  PackedForms v;
  for (std::size_t k = 0; k < 6; ++k) {
    v[static_cast<Eigen::Index>(k)] = a.components()[k];
    v[static_cast<Eigen::Index>(k + 6)] = b.components()[k];
    v[static_cast<Eigen::Index>(k + 12)] = c.components()[k];
  }
  return v;
}

inline FieldJet<TwoForm, 4> unpack(const FieldJet<PackedForms, 4>& j, int slot) {
  auto take = [slot](const PackedForms& v) {
    std::array<double, 6> c{};
    for (std::size_t k = 0; k < 6; ++k) c[k] = v[static_cast<Eigen::Index>(6 * slot) + static_cast<Eigen::Index>(k)];
    return TwoForm(c);
  };
  FieldJet<TwoForm, 4> out{take(j.value), {}};
  for (std::size_t c = 0; c < 4; ++c) out.d[c] = take(j.d[c]);
  return out;
}

}  // namespace detail

/// Every pointwise residual at one chart point.
struct PointResiduals {
  double closed = 0.0;            // |dF|
  double coclosed = 0.0;          // |d*F|
  double self_dual_closed = 0.0;  // |dF+|
  double energy = 0.0;
  double matter = 0.0;
  double scalar = 0.0;  // s_h itself
  // conformal data only
  double potential = 0.0;  // |recovered f - f|
  double holomorphy = 0.0;
  double conformal_ricci = 0.0;
  double killing = 0.0;
};

/// Evaluates F, *F and F+ on one shared stencil so the three exterior
/// derivatives cost one set of field evaluations.
inline PointResiduals evaluate_point(const EMConfig& cfg, const ChartPoint<4>& p) {
  PointResiduals r;
  const CurvatureBundle<4> cb = curvature<4>(cfg.metric, p);
  const TwoForm f = cfg.maxwell(p);
  const FormMetric hm(cb.g);
  const SelfDualSplit sp = sd_asd_split(hm, cfg.orientation, f);
  r.scalar = cb.scalar;
  r.energy = tensor_norm<4>(trace_free<4>(cb.ricci + compose(f, f, cb.ginv), cb.g, cb.ginv), cb.ginv);
  r.matter = tensor_norm<4>(cb.ricci0 + 2.0 * compose(sp.plus, sp.minus, cb.ginv), cb.ginv);

  const Field<detail::PackedForms, 4> packed(
      [&cfg](const ChartPoint<4>& q) {
        const TwoForm fq = cfg.maxwell(q);
        const FormMetric mq(cfg.metric.metric(q));
        const TwoForm star = hodge_star(mq, cfg.orientation, fq);
        return detail::pack(fq, star, 0.5 * (fq + star));
      },
      cfg.maxwell.domain(), cfg.maxwell.steps());
  const FieldJet<detail::PackedForms, 4> pj = packed.jet(p);
  r.closed = three_form_norm(exterior_derivative(detail::unpack(pj, 0)), cb.ginv);
  r.coclosed = three_form_norm(exterior_derivative(detail::unpack(pj, 1)), cb.ginv);
  r.self_dual_closed = three_form_norm(exterior_derivative(detail::unpack(pj, 2)), cb.ginv);

  if (cfg.conformal) {
    const ConformalData& cd = *cfg.conformal;
    const double fv = cd.potential(p).value;
    const double norm = form_norm(sp.plus, hm.ginv);
    if (norm < 1e-14) throw ZeroSelfDualPart("self-dual part vanishes at " + p.str());
    r.potential = std::abs(std::pow(2.0, -0.25) * std::sqrt(norm) - fv);
    const Mat<4> ginv = inverse_metric<4>(cd.kahler_metric.metric(p));
    const AlmostComplexStructure J = AlmostComplexStructure::from_kahler_form(ginv, cd.kahler_form);
    r.holomorphy = holomorphy_residual(cd.kahler_metric, J, cd.potential, p);
    r.conformal_ricci = conformal_ricci_residual<4>(cd.kahler_metric, cd.potential, p);
    r.killing = killing_residual<4>(hamiltonian_vector_field(cd.kahler_metric, cd.kahler_form, cd.potential), cd.kahler_metric, p);
  }
  return r;
}

/// Evaluate every residual on the grid and aggregate. Per-point results are
/// stored by grid index and reduced in index order, so the report does not
/// depend on the thread count.
inline ResidualReport verify(const EMConfig& cfg, const GridSpec& grid, const Tolerances& tol, unsigned threads = 1) {
  const std::vector<ChartPoint<4>> pts = grid.points(cfg.metric.domain());
  std::vector<PointResiduals> res(pts.size());
  parallel_for(pts.size(), threads, [&](std::size_t i) {
    try {
      res[i] = evaluate_point(cfg, pts[i]);
    } catch (const Error& e) {
      throw Error(std::string(e.what()) + " [grid point " + pts[i].str() + "]");
    }
  });

  ResidualReport rep;
  rep.grid = grid;
  rep.tolerances = tol;
  auto line = [&](const std::string& name, Tier tier, auto get) {
    ResidualLine l;
    l.equation = name;
    l.tier = tier;
    l.tolerance = tol.for_tier(tier);
    double sum = 0.0;
    for (const auto& r : res) {
      const double v = get(r);
      l.max = std::max(l.max, v);
      sum += v;
    }
    l.count = res.size();
    l.mean = res.empty() ? 0.0 : sum / static_cast<double>(res.size());
    rep.lines.push_back(l);
  };

  std::vector<double> s;
  s.reserve(res.size());
  for (const auto& r : res) s.push_back(r.scalar);
  rep.scalar_median = median(s);
  const double scale = std::max(1.0, std::abs(rep.scalar_median));
  for (double v : s) rep.scalar_spread = std::max(rep.scalar_spread, std::abs(v - rep.scalar_median));

  line("closed", Tier::FiniteDifference, [](const PointResiduals& r) { return r.closed; });
  line("coclosed", Tier::FiniteDifference, [](const PointResiduals& r) { return r.coclosed; });
  line("self_dual_closed", Tier::FiniteDifference, [](const PointResiduals& r) { return r.self_dual_closed; });
  line("energy", Tier::Jet, [](const PointResiduals& r) { return r.energy; });
  line("matter", Tier::Jet, [](const PointResiduals& r) { return r.matter; });
  line("energy_matter_agreement", Tier::Exact, [](const PointResiduals& r) { return std::abs(r.energy - r.matter); });
  const double med = rep.scalar_median;
  line("scalar_constant", Tier::Jet, [med, scale](const PointResiduals& r) { return std::abs(r.scalar - med) / scale; });
  if (cfg.conformal) {
    line("potential_recovery", Tier::Jet, [](const PointResiduals& r) { return r.potential; });
    line("holomorphy", Tier::Jet, [](const PointResiduals& r) { return r.holomorphy; });
    line("conformal_ricci", Tier::Jet, [](const PointResiduals& r) { return r.conformal_ricci; });
    line("killing", Tier::Jet, [](const PointResiduals& r) { return r.killing; });
  }

  if (!cfg.isotropic_axes.empty()) {
    // Group points that differ only along the isotropic axes and compare.
    std::array<bool, 4> iso{};
    for (int a : cfg.isotropic_axes) iso[static_cast<std::size_t>(a)] = true;
    std::size_t stride = 1;
    std::array<std::size_t, 4> strides{};
    for (int a = 3; a >= 0; --a) {
      strides[static_cast<std::size_t>(a)] = stride;
      stride *= static_cast<std::size_t>(grid.counts[static_cast<std::size_t>(a)]);
    }
    std::vector<double> iso_dev(res.size(), 0.0);
    for (std::size_t i = 0; i < res.size(); ++i) {
      std::size_t base = 0, rem = i;
      for (std::size_t a = 0; a < 4; ++a) {
        const std::size_t k = rem / strides[a];
        rem %= strides[a];
        if (!iso[a]) base += k * strides[a];
      }
      iso_dev[i] = std::max(std::abs(res[i].scalar - res[base].scalar) / scale, std::abs(res[i].energy - res[base].energy));
    }
    ResidualLine l;
    l.equation = "isotropy";
    l.tier = Tier::Jet;
    l.tolerance = tol.jet;
    double sum = 0.0;
    for (double v : iso_dev) {
      l.max = std::max(l.max, v);
      sum += v;
    }
    l.count = iso_dev.size();
    l.mean = iso_dev.empty() ? 0.0 : sum / static_cast<double>(iso_dev.size());
    rep.lines.push_back(l);
  }
  return rep;
}

}  // namespace emk
