#pragma once

// Random corpus for the identity suite: polynomial perturbations of the flat
// metric, polynomial two-form fields, a non-polynomial dual-number metric,
// the quartic family and a product of round spheres.

#include "emk/core.hpp"
#include "emk/curvature.hpp"
#include "emk/em_check.hpp"
#include "emk/forms.hpp"
#include "emk/metric.hpp"
#include "emk/quartic_family.hpp"

#include <random>
#include <string>
#include <vector>

namespace emk {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

/// Box [-0.6, 0.6]^4 carrying the random corpus; sample points stay in
/// [-0.5, 0.5]^4 so difference stencils never leave it.
inline Domain<4> corpus_domain() {
  Domain<4> d;
  d.lower.fill(-0.6);
  d.upper.fill(0.6);
  return d;
}

inline ChartPoint<4> random_point(Rng& rng, double half_width = 0.5) {
  ChartPoint<4> p;
  for (auto& v : p.x) v = uniform(rng, -half_width, half_width);
  return p;
}

/// delta + eps (A + B.x + x.C.x) with symmetric coefficient matrices. The
/// bounds keep every Gershgorin disc away from zero on [-0.6, 0.6]^4.
struct PolynomialMetric {
  double eps = 0.1;
  std::array<std::array<double, 4>, 4> a{};
  std::array<std::array<std::array<double, 4>, 4>, 4> b{};
  std::array<std::array<std::array<std::array<double, 4>, 4>, 4>, 4> c{};

  static PolynomialMetric random(Rng& rng, double eps = 0.1) {
    PolynomialMetric m;
    m.eps = eps;
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j) {
        m.a[i][j] = m.a[j][i] = uniform(rng, -1.0, 1.0);
        for (int k = 0; k < 4; ++k) {
          m.b[i][j][k] = m.b[j][i][k] = uniform(rng, -0.25, 0.25);
          for (int l = 0; l < 4; ++l) m.c[i][j][k][l] = m.c[j][i][k][l] = uniform(rng, -1.0 / 16, 1.0 / 16);
        }
      }
    return m;
  }

  template <class T> MetricComponents<T, 4> operator()(const std::array<T, 4>& x) const {
    MetricComponents<T, 4> g;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = i; j < 4; ++j) {
        T v = T(a[i][j]);
        for (std::size_t k = 0; k < 4; ++k) {
          v = v + b[i][j][k] * x[k];
          for (std::size_t l = 0; l < 4; ++l) v = v + c[i][j][k][l] * (x[k] * x[l]);
        }
        g[i][j] = (i == j ? T(1.0) : T(0.0)) + eps * v;
        g[j][i] = g[i][j];
      }
    return g;
  }
};

inline MetricOracle<4> random_perturbed_metric(Rng& rng, double eps = 0.1) {
  return dual_metric<4>(PolynomialMetric::random(rng, eps), corpus_domain());
}

/// A smooth non-polynomial metric exercising exp, sin and cos in the dual numbers.
inline MetricOracle<4> warped_metric() {
  return dual_metric<4>(
      [](const auto& x) {
        using T = std::decay_t<decltype(x[0])>;
        MetricComponents<T, 4> g;
        for (auto& row : g) row.fill(T(0.0));
        g[0][0] = exp(0.3 * x[1] * x[2]);
        g[1][1] = 1.0 + 0.2 * sin(x[0] + x[3]) * sin(x[0] + x[3]);
        g[2][2] = 1.0 + 0.1 * x[0] * x[0] + 0.1 * cos(x[1]);
        g[3][3] = 1.2 + 0.2 * x[2] * x[3];
        g[0][1] = g[1][0] = 0.1 * sin(x[2]);
        g[2][3] = g[3][2] = 0.05 * x[0] * x[1];
        return g;
      },
      corpus_domain());
}

/// Six quadratic polynomial components with closed-form partials.
struct PolynomialFormField {
  std::array<double, 6> c0{};
  std::array<std::array<double, 4>, 6> c1{};
  std::array<std::array<std::array<double, 4>, 4>, 6> c2{};

  static PolynomialFormField random(Rng& rng) {
    PolynomialFormField f;
    for (std::size_t k = 0; k < 6; ++k) {
      f.c0[k] = uniform(rng, -1.0, 1.0);
      for (std::size_t i = 0; i < 4; ++i) {
        f.c1[k][i] = uniform(rng, -1.0, 1.0);
        for (std::size_t j = 0; j < 4; ++j) f.c2[k][i][j] = uniform(rng, -1.0, 1.0);
      }
    }
    return f;
  }

  TwoForm value(const ChartPoint<4>& p) const {
    std::array<double, 6> out{};
    for (std::size_t k = 0; k < 6; ++k) {
      double v = c0[k];
      for (std::size_t i = 0; i < 4; ++i) {
        v += c1[k][i] * p.x[i];
        for (std::size_t j = 0; j < 4; ++j) v += c2[k][i][j] * p.x[i] * p.x[j];
      }
      out[k] = v;
    }
    return TwoForm(out);
  }

  FieldJet<TwoForm, 4> jet(const ChartPoint<4>& p) const {
    FieldJet<TwoForm, 4> j{value(p), {}};
    for (std::size_t e = 0; e < 4; ++e) {
      std::array<double, 6> d{};
      for (std::size_t k = 0; k < 6; ++k) {
        double v = c1[k][e];
        for (std::size_t i = 0; i < 4; ++i) v += (c2[k][e][i] + c2[k][i][e]) * p.x[i];
        d[k] = v;
      }
      j.d[e] = TwoForm(d);
    }
    return j;
  }

  TwoFormField field(Domain<4> domain = corpus_domain()) const {
    const PolynomialFormField self = *this;
    return TwoFormField([self](const ChartPoint<4>& p) { return self.value(p); },
                        [self](const ChartPoint<4>& p) { return self.jet(p); }, domain);
  }
};

inline TwoForm random_form(Rng& rng) {
  std::array<double, 6> c{};
  for (double& v : c) v = uniform(rng, -1.0, 1.0);
  return TwoForm(c);
}

/// Product of round spheres with F+ = w and F- fixed by the trace-free Ricci
/// tensor (potential f = 1). Equal radii give F- = 0.
inline EMConfig sphere_product_config(double r1, double r2) {
  const MetricOracle<4> g = product_metric(round_sphere_darboux(r1), round_sphere_darboux(r2));
  const TwoForm w = TwoForm::basis(0, 1) + TwoForm::basis(2, 3);
  EMConfig cfg;
  cfg.metric = g;
  cfg.maxwell = strongly_hermitian_field(g, w, constant_scalar_field<4>(1.0));
  cfg.conformal = ConformalData{g, constant_scalar_field<4>(1.0), w};
  cfg.isotropic_axes = {1, 3};
  return cfg;
}

/// A metric of the corpus together with points where it may be sampled.
struct CorpusMetric {
  std::string name;
  MetricOracle<4> metric;
  std::vector<ChartPoint<4>> points;
};

inline std::vector<ChartPoint<4>> interior_points(const Domain<4>& dom, Rng& rng, int count, double margin = 0.05) {
  std::vector<ChartPoint<4>> pts;
  for (int k = 0; k < count; ++k) {
    ChartPoint<4> p;
    for (std::size_t i = 0; i < 4; ++i) {
      const double w = dom.upper[i] - dom.lower[i];
      p.x[i] = dom.lower[i] + w * uniform(rng, margin, 1.0 - margin);
    }
    pts.push_back(p);
  }
  return pts;
}

/// Corpus of metrics: five random perturbations, the warped metric, the
/// quartic-family metrics g and h for (1, 2) and a product of unequal spheres.
inline std::vector<CorpusMetric> metric_corpus(Rng& rng, int points_per_metric = 4) {
  std::vector<CorpusMetric> out;
  for (int k = 0; k < 5; ++k) {
    CorpusMetric m{"perturbed_" + std::to_string(k), random_perturbed_metric(rng), {}};
    for (int i = 0; i < points_per_metric; ++i) m.points.push_back(random_point(rng));
    out.push_back(std::move(m));
  }
  CorpusMetric warped{"warped", warped_metric(), {}};
  for (int i = 0; i < points_per_metric; ++i) warped.points.push_back(random_point(rng));
  out.push_back(std::move(warped));
  const ProductChart chart = build_chart(FamilyParams::make(1.0, 2.0));
  out.push_back({"family_g", chart.g, interior_points(chart.domain, rng, points_per_metric)});
  out.push_back({"family_h", chart.h, interior_points(chart.domain, rng, points_per_metric)});
  const EMConfig spheres = sphere_product_config(0.8, 1.3);
  out.push_back({"sphere_product", spheres.metric, interior_points(spheres.metric.domain(), rng, points_per_metric)});
  return out;
}

struct IdentityResult {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  std::size_t samples = 0;

  bool pass() const { return samples > 0 && max_residual < tolerance; }
};

struct IdentityReport {
  std::vector<IdentityResult> results;

  bool pass() const {
    return !results.empty() && std::all_of(results.begin(), results.end(), [](const IdentityResult& r) { return r.pass(); });
  }
  const IdentityResult* find(const std::string& name) const {
    for (const auto& r : results)
      if (r.name == name) return &r;
    return nullptr;
  }
};

struct IdentityOptions {
  std::uint64_t seed = 20150117;
  int samples = 200;        // random forms per metric point for the algebraic identities
  int leibniz_fields = 100;  // random fields per perturbed metric
  int leibniz_metrics = 5;
  Conventions conventions{};
};

namespace detail {

/// Largest component of a metric jet, at least 1; difference errors scale with it.
inline double jet_scale(const MetricJet<4>& j) {
  double s = std::max(1.0, j.g.cwiseAbs().maxCoeff());
  for (const auto& m : j.dg) s = std::max(s, m.cwiseAbs().maxCoeff());
  for (const auto& row : j.ddg)
    for (const auto& m : row) s = std::max(s, m.cwiseAbs().maxCoeff());
  return s;
}

struct Tracker {
  IdentityResult r;
  Tracker(std::string name, double tol) { r.name = std::move(name), r.tolerance = tol; }
  void add(double v) {
    r.max_residual = std::max(r.max_residual, std::isfinite(v) ? v : INFINITY);
    ++r.samples;
  }
};

}  // namespace detail

/// The Leibniz identity over random polynomial fields on random perturbed metrics.
inline IdentityResult leibniz_corpus(Rng& rng, int metrics, int fields, Conventions conv) {
  detail::Tracker t("leibniz", 1e-7);
  for (int m = 0; m < metrics; ++m) {
    const MetricOracle<4> g = random_perturbed_metric(rng);
    for (int k = 0; k < fields; ++k) {
      const TwoFormField f = PolynomialFormField::random(rng).field();
      t.add(leibniz_residual(f, g, Orientation{}, random_point(rng), conv));
    }
  }
  return t.r;
}

/// Run every identity of the corpus with a fixed seed.
inline IdentityReport run_identity_corpus(const IdentityOptions& opt) {
  Rng rng(opt.seed);
  IdentityReport rep;
  const std::vector<CorpusMetric> corpus = metric_corpus(rng);

  detail::Tracker involution("hodge_involution", 1e-12), orthogonal("sd_asd_orthogonal", 1e-12),
      square("sd_square_pure_trace", 1e-12), commute("sd_asd_commute", 1e-12), trace_free_sq("trace_free_square", 1e-12),
      conformal("conformal_split_invariance", 1e-12), equivalence("energy_matter_agreement", 1e-12),
      riemann("riemann_symmetries", 1e-10), oracle("oracle_consistency", 1e-8), bianchi("bianchi", 1e-6),
      routes("codifferential_routes", 1e-7);

  for (const CorpusMetric& cm : corpus) {
    for (const ChartPoint<4>& p : cm.points) {
      const CurvatureBundle<4> cb = curvature<4>(cm.metric, p);
      const FormMetric fm(cb.g);
      riemann.add(riemann_symmetry_defect<4>(cb));
      oracle.add(oracle_fd_discrepancy<4>(cm.metric, p) / detail::jet_scale(cm.metric.jet(p)));
      bianchi.add(bianchi_residual<4>(cm.metric, p));
      for (int s = 0; s < opt.samples; ++s) {
        const TwoForm f = random_form(rng);
        const double scale = std::max(1.0, form_inner(f, f, fm.ginv));
        const SelfDualSplit sp = sd_asd_split(fm, {}, f);
        involution.add((hodge_star(fm, {}, hodge_star(fm, {}, f)) - f).max_abs() / std::sqrt(scale));
        orthogonal.add(std::abs(form_inner(sp.plus, sp.minus, fm.ginv)) / scale);
        const double n2 = form_inner(sp.plus, sp.plus, fm.ginv);
        square.add(tensor_norm<4>(compose(sp.plus, sp.plus, fm.ginv) + 0.5 * n2 * cb.g, fm.ginv) / scale);
        commute.add(tensor_norm<4>(compose(sp.plus, sp.minus, fm.ginv) - compose(sp.minus, sp.plus, fm.ginv), fm.ginv) / scale);
        trace_free_sq.add(
            tensor_norm<4>(trace_free<4>(compose(f, f, fm.ginv), cb.g, fm.ginv) - 2.0 * compose(sp.plus, sp.minus, fm.ginv), fm.ginv) /
            scale);
        const double w = std::exp(uniform(rng, -1.0, 1.0));
        const SelfDualSplit sp2 = sd_asd_split(FormMetric(w * cb.g), {}, f);
        conformal.add(std::max((sp2.plus - sp.plus).max_abs(), (sp2.minus - sp.minus).max_abs()) / std::sqrt(scale));
        const double energy = tensor_norm<4>(trace_free<4>(cb.ricci + compose(f, f, fm.ginv), cb.g, fm.ginv), fm.ginv);
        const double matter = tensor_norm<4>(cb.ricci0 + 2.0 * compose(sp.plus, sp.minus, fm.ginv), fm.ginv);
        equivalence.add(std::abs(energy - matter) / std::max(1.0, energy));
      }
    }
  }

  // Two independent routes to the divergence of a two-form.
  for (int k = 0; k < 20; ++k) {
    const MetricOracle<4> g = random_perturbed_metric(rng);
    const TwoFormField f = PolynomialFormField::random(rng).field();
    const ChartPoint<4> p = random_point(rng);
    const Vec<4> hodge = -codifferential(f, g, Orientation{}, p, opt.conventions);
    const Vec<4> cov = divergence_two_form(f, g, p);
    routes.add((hodge - cov).cwiseAbs().maxCoeff());
  }

  for (auto* t : {&involution, &orthogonal, &square, &commute, &trace_free_sq, &conformal, &equivalence, &riemann, &oracle, &bianchi, &routes})
    rep.results.push_back(t->r);
  rep.results.push_back(leibniz_corpus(rng, opt.leibniz_metrics, opt.leibniz_fields, opt.conventions));
  return rep;
}

}  // namespace emk
