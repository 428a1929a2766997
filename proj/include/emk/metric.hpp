#pragma once

// Metric jets and the oracles that supply them.
//
// MetricJet<N> holds g_ab, dg[c](a,b) = d_c g_ab and ddg[c][d](a,b) =
// d_c d_d g_ab at one chart point. Oracles are values: cheap to copy, safe to
// share across threads, and pure functions of the chart point.

#include "emk/core.hpp"
#include "emk/field.hpp"
#include "emk/jet.hpp"

#include <algorithm>
#include <functional>
#include <memory>
#include <utility>

namespace emk {

template <int N> struct MetricJet {
  Mat<N> g = Mat<N>::Identity();
  std::array<Mat<N>, N> dg{};
  std::array<std::array<Mat<N>, N>, N> ddg{};

  MetricJet() {
    for (auto& m : dg) m.setZero();
    for (auto& row : ddg)
      for (auto& m : row) m.setZero();
  }

  /// Largest violation of the jet symmetries (metric indices, derivative
  /// indices). Zero for any jet produced by the oracles below.
  double symmetry_defect() const {
    double e = (g - g.transpose()).cwiseAbs().maxCoeff();
    for (int c = 0; c < N; ++c) {
      e = std::max(e, (dg[c] - dg[c].transpose()).cwiseAbs().maxCoeff());
      for (int d = 0; d < N; ++d) {
        e = std::max(e, (ddg[c][d] - ddg[c][d].transpose()).cwiseAbs().maxCoeff());
        e = std::max(e, (ddg[c][d] - ddg[d][c]).cwiseAbs().maxCoeff());
      }
    }
    return e;
  }
};

/// Inverse of a positive-definite metric; throws SingularMetric otherwise.
template <int N> Mat<N> inverse_metric(const Mat<N>& g) {
  Eigen::LLT<Mat<N>> llt(g);
  if (llt.info() != Eigen::Success || !g.allFinite())
    throw SingularMetric("metric is not positive definite");
  const double det = g.determinant();
  if (!(det > 0.0) || !std::isfinite(det)) throw SingularMetric("metric determinant is not positive");
  return g.inverse();
}

/// Supplier of metric jets over a chart domain.
template <int N> class MetricOracle {
 public:
  using JetFn = std::function<MetricJet<N>(const ChartPoint<N>&)>;
  using ValueFn = std::function<Mat<N>(const ChartPoint<N>&)>;

  MetricOracle() = default;
  MetricOracle(JetFn jet, Domain<N> domain) : jet_(std::move(jet)), domain_(domain) {}
  MetricOracle(JetFn jet, ValueFn value, Domain<N> domain)
      : jet_(std::move(jet)), value_(std::move(value)), domain_(domain) {}

  MetricJet<N> jet(const ChartPoint<N>& p) const { return jet_(p); }
  Mat<N> metric(const ChartPoint<N>& p) const { return value_ ? value_(p) : jet_(p).g; }
  const Domain<N>& domain() const { return domain_; }

 private:
  JetFn jet_;
  ValueFn value_;
  Domain<N> domain_ = Domain<N>::unbounded();
};

template <int N> MetricOracle<N> flat_metric(Domain<N> domain = Domain<N>::unbounded()) {
  return MetricOracle<N>([](const ChartPoint<N>&) { return MetricJet<N>{}; }, domain);
}

template <class T, int N> using MetricComponents = std::array<std::array<T, N>, N>;

/// Metric given as a generic callable `f(const std::array<T, N>&)` returning
/// MetricComponents<T, N>; jets come from second-order dual numbers. Only the
/// upper triangle of the returned components is read.
template <int N, class F> MetricOracle<N> dual_metric(F f, Domain<N> domain = Domain<N>::unbounded()) {
  auto jet = [f](const ChartPoint<N>& p) {
    const MetricComponents<Jet2<N>, N> m = f(seed(p));
    MetricJet<N> out;
    for (int a = 0; a < N; ++a)
      for (int b = a; b < N; ++b) {
        const Jet2<N>& e = m[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
        out.g(a, b) = out.g(b, a) = e.v;
        for (int c = 0; c < N; ++c) {
          out.dg[c](a, b) = out.dg[c](b, a) = e.d[c];
          for (int d = 0; d < N; ++d) out.ddg[c][d](a, b) = out.ddg[c][d](b, a) = e.h(c, d);
        }
      }
    return out;
  };
  auto value = [f](const ChartPoint<N>& p) {
    const MetricComponents<double, N> m = f(p.x);
    Mat<N> g;
    for (int a = 0; a < N; ++a)
      for (int b = a; b < N; ++b) g(a, b) = g(b, a) = m[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
    return g;
  };
  return MetricOracle<N>(jet, value, domain);
}

/// Surface metric in momentum/angle (Darboux) form
///   dx^2 / P(x) + P(x) dy^2
/// given P and its first two derivatives as {P, P', P''}.
inline MetricOracle<2> darboux_surface(std::function<std::array<double, 3>(double)> profile, Domain<2> domain) {
  auto jet = [profile](const ChartPoint<2>& p) {
    const auto [P, P1, P2] = profile(p[0]);
    if (!(P > 0.0)) throw SingularMetric("Darboux profile is not positive at " + p.str());
    MetricJet<2> m;
    m.g << 1.0 / P, 0.0, 0.0, P;
    m.dg[0] << -P1 / (P * P), 0.0, 0.0, P1;
    m.ddg[0][0] << -P2 / (P * P) + 2.0 * P1 * P1 / (P * P * P), 0.0, 0.0, P2;
    return m;
  };
  return MetricOracle<2>(jet, domain);
}

/// Round sphere of scalar curvature 2/R^2 in Darboux form on (-R^2, R^2).
inline MetricOracle<2> round_sphere_darboux(double radius) {
  const double r2 = radius * radius;
  Domain<2> dom;
  dom.lower = {-r2, 0.0};
  dom.upper = {r2, 2.0 * kPi};
  dom.periodic = {false, true};
  return darboux_surface([r2](double u) { return std::array<double, 3>{r2 - u * u / r2, -2.0 * u / r2, -2.0 / r2}; }, dom);
}

/// Riemannian product g1 + g2 of two surface charts, coordinates
/// (x1, y1, x2, y2). Jets are assembled block by block.
inline MetricOracle<4> product_metric(MetricOracle<2> first, MetricOracle<2> second) {
  Domain<4> dom;
  for (std::size_t i = 0; i < 2; ++i) {
    dom.lower[i] = first.domain().lower[i];
    dom.upper[i] = first.domain().upper[i];
    dom.periodic[i] = first.domain().periodic[i];
    dom.lower[i + 2] = second.domain().lower[i];
    dom.upper[i + 2] = second.domain().upper[i];
    dom.periodic[i + 2] = second.domain().periodic[i];
  }
  auto jet = [first, second](const ChartPoint<4>& p) {
    const MetricJet<2> j1 = first.jet(ChartPoint<2>{{p[0], p[1]}});
    const MetricJet<2> j2 = second.jet(ChartPoint<2>{{p[2], p[3]}});
    MetricJet<4> m;
    m.g.setZero();
    m.g.block<2, 2>(0, 0) = j1.g;
    m.g.block<2, 2>(2, 2) = j2.g;
    for (int c = 0; c < 2; ++c) {
      m.dg[c].block<2, 2>(0, 0) = j1.dg[c];
      m.dg[c + 2].block<2, 2>(2, 2) = j2.dg[c];
      for (int d = 0; d < 2; ++d) {
        m.ddg[c][d].block<2, 2>(0, 0) = j1.ddg[c][d];
        m.ddg[c + 2][d + 2].block<2, 2>(2, 2) = j2.ddg[c][d];
      }
    }
    return m;
  };
  return MetricOracle<4>(jet, dom);
}

/// The conformal metric h = f^-2 g, with jets from the product rule.
template <int N> MetricOracle<N> conformal_metric(MetricOracle<N> g, ScalarField<N> f) {
  auto jet = [g, f](const ChartPoint<N>& p) {
    const MetricJet<N> gj = g.jet(p);
    const ScalarJet<N> fj = f(p);
    if (!(fj.value > 0.0)) throw NonPositivePotential("conformal factor is not positive at " + p.str());
    const double inv = 1.0 / fj.value;
    const double w = inv * inv;
    const Vec<N> dw = -2.0 * inv * inv * inv * fj.grad;
    const Mat<N> ddw = 6.0 * w * w * fj.grad * fj.grad.transpose() - 2.0 * inv * inv * inv * fj.hess;
    MetricJet<N> h;
    h.g = w * gj.g;
    for (int c = 0; c < N; ++c) {
      h.dg[c] = dw[c] * gj.g + w * gj.dg[c];
      for (int d = 0; d < N; ++d)
        h.ddg[c][d] = ddw(c, d) * gj.g + dw[c] * gj.dg[d] + dw[d] * gj.dg[c] + w * gj.ddg[c][d];
    }
    return h;
  };
  return MetricOracle<N>(jet, g.domain());
}

/// Largest discrepancy between an oracle's closed-form partials and
/// Richardson-extrapolated central differences: dg against differences of g,
/// ddg against differences of dg.
template <int N> double oracle_fd_discrepancy(const MetricOracle<N>& oracle, const ChartPoint<N>& p, double step = 1e-4) {
  const MetricJet<N> j = oracle.jet(p);
  double err = 0.0;
  for (int c = 0; c < N; ++c) {
    auto diff = [&](double h, auto get) {
      return decltype(get(j))((get(oracle.jet(p.shifted(c, h))) - get(oracle.jet(p.shifted(c, -h)))) / (2.0 * h));
    };
    auto rich = [&](auto get) {
      const auto wide = diff(step, get);
      const auto narrow = diff(0.5 * step, get);
      return decltype(wide)((4.0 * narrow - wide) / 3.0);
    };
    const Mat<N> dg_fd = rich([](const MetricJet<N>& m) { return m.g; });
    err = std::max(err, (dg_fd - j.dg[c]).cwiseAbs().maxCoeff());
    for (int d = 0; d < N; ++d) {
      const Mat<N> ddg_fd = rich([d](const MetricJet<N>& m) { return m.dg[d]; });
      err = std::max(err, (ddg_fd - j.ddg[c][d]).cwiseAbs().maxCoeff());
    }
  }
  return err;
}

}  // namespace emk
