#pragma once

// Levi-Civita connection and curvature from metric jets.
//
// Conventions (fixed once, used everywhere):
//   Gamma^a_bc   = 1/2 g^ad (d_b g_dc + d_c g_bd - d_d g_bc)
//   R^a_bcd      = d_c Gamma^a_db - d_d Gamma^a_cb
//                  + Gamma^a_ce Gamma^e_db - Gamma^a_de Gamma^e_cb
//   r_bd         = R^a_bad,   s = g^bd r_bd,   r0 = r - (s/n) g
//   Laplacian    = -g^ab nabla_a nabla_b      (positive spectrum)
// With these, the round sphere has s > 0 and a Darboux surface
// dt^2/P + P dtheta^2 has s = -P''.

#include "emk/core.hpp"
#include "emk/field.hpp"
#include "emk/metric.hpp"

#include <algorithm>

namespace emk {

/// gamma[a](b, c) = Gamma^a_bc
template <int N> using Connection = std::array<Mat<N>, N>;

template <int N> using Rank3 = std::array<Mat<N>, N>;
template <int N> using Rank4 = std::array<std::array<Mat<N>, N>, N>;

template <int N> struct CurvatureBundle {
  Mat<N> g;
  Mat<N> ginv;
  Connection<N> gamma;
  Rank4<N> riemann;  // riemann[a][b](c, d) = R^a_bcd
  Mat<N> ricci;
  Mat<N> ricci0;
  double scalar = 0.0;
  double volume_density = 0.0;  // sqrt(det g)
};

namespace detail {

// T[d](b, c) = d_b g_dc + d_c g_bd - d_d g_bc
template <int N> Rank3<N> christoffel_first_kind_twice(const std::array<Mat<N>, N>& dg) {
  Rank3<N> t;
  for (int d = 0; d < N; ++d)
    for (int b = 0; b < N; ++b)
      for (int c = 0; c < N; ++c) t[d](b, c) = dg[b](d, c) + dg[c](b, d) - dg[d](b, c);
  return t;
}

template <int N> Connection<N> raise_first(const Mat<N>& ginv, const Rank3<N>& lower) {
  Connection<N> gamma;
  for (int a = 0; a < N; ++a) {
    gamma[a].setZero();
    for (int d = 0; d < N; ++d) gamma[a] += 0.5 * ginv(a, d) * lower[d];
  }
  return gamma;
}

}  // namespace detail

template <int N> Connection<N> christoffel(const MetricJet<N>& jet) {
  const Mat<N> ginv = inverse_metric<N>(jet.g);
  return detail::raise_first<N>(ginv, detail::christoffel_first_kind_twice<N>(jet.dg));
}

template <int N> CurvatureBundle<N> curvature(const MetricJet<N>& jet) {
  CurvatureBundle<N> cb;
  cb.g = jet.g;
  cb.ginv = inverse_metric<N>(jet.g);
  cb.volume_density = std::sqrt(jet.g.determinant());
  const Rank3<N> t = detail::christoffel_first_kind_twice<N>(jet.dg);
  cb.gamma = detail::raise_first<N>(cb.ginv, t);

  // dgamma[e][a](b, c) = d_e Gamma^a_bc
  Rank4<N> dgamma;
  for (int e = 0; e < N; ++e) {
    const Mat<N> dginv = -cb.ginv * jet.dg[e] * cb.ginv;
    Rank3<N> dt;
    for (int d = 0; d < N; ++d)
      for (int b = 0; b < N; ++b)
        for (int c = 0; c < N; ++c)
          dt[d](b, c) = jet.ddg[e][b](d, c) + jet.ddg[e][c](b, d) - jet.ddg[e][d](b, c);
    for (int a = 0; a < N; ++a) {
      dgamma[e][a].setZero();
      for (int d = 0; d < N; ++d) dgamma[e][a] += 0.5 * (dginv(a, d) * t[d] + cb.ginv(a, d) * dt[d]);
    }
  }

  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) {
      Mat<N>& r = cb.riemann[a][b];
      for (int c = 0; c < N; ++c)
        for (int d = 0; d < N; ++d) {
          double v = dgamma[c][a](d, b) - dgamma[d][a](c, b);
          for (int e = 0; e < N; ++e) v += cb.gamma[a](c, e) * cb.gamma[e](d, b) - cb.gamma[a](d, e) * cb.gamma[e](c, b);
          r(c, d) = v;
        }
    }

  cb.ricci.setZero();
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b)
      for (int d = 0; d < N; ++d) cb.ricci(b, d) += cb.riemann[a][b](a, d);
  cb.ricci = 0.5 * (cb.ricci + cb.ricci.transpose()).eval();
  cb.scalar = (cb.ginv.cwiseProduct(cb.ricci)).sum();
  cb.ricci0 = cb.ricci - (cb.scalar / N) * cb.g;
  return cb;
}

template <int N> CurvatureBundle<N> curvature(const MetricOracle<N>& oracle, const ChartPoint<N>& p) {
  return curvature<N>(oracle.jet(p));
}

/// |S|_g for a 2-tensor, full contraction S_ab S^ab.
template <int N> double tensor_norm(const Mat<N>& s, const Mat<N>& ginv) {
  return std::sqrt(std::max(0.0, (ginv * s * ginv).cwiseProduct(s).sum()));
}

template <int N> double covector_norm(const Vec<N>& v, const Mat<N>& ginv) {
  return std::sqrt(std::max(0.0, v.dot(ginv * v)));
}

template <int N> Mat<N> trace_free(const Mat<N>& s, const Mat<N>& g, const Mat<N>& ginv) {
  return s - (ginv.cwiseProduct(s).sum() / N) * g;
}

/// Pair-exchange and first-Bianchi defects of R_abcd, relative to max |R_abcd|.
template <int N> double riemann_symmetry_defect(const CurvatureBundle<N>& cb) {
  Rank4<N> low;  // low[a][b](c, d) = R_abcd
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) {
      low[a][b].setZero();
      for (int e = 0; e < N; ++e) low[a][b] += cb.g(a, e) * cb.riemann[e][b];
    }
  double scale = 0.0, defect = 0.0;
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b)
      for (int c = 0; c < N; ++c)
        for (int d = 0; d < N; ++d) {
          scale = std::max(scale, std::abs(low[a][b](c, d)));
          defect = std::max(defect, std::abs(low[a][b](c, d) - low[c][d](a, b)));
          defect = std::max(defect, std::abs(low[a][b](c, d) + low[a][c](d, b) + low[a][d](b, c)));
        }
  return scale > 0.0 ? defect / scale : defect;
}

/// (div S)_b = g^ac nabla_a S_cb
template <int N> Vec<N> divergence_sym2(const Sym2Field<N>& field, const MetricOracle<N>& oracle, const ChartPoint<N>& p) {
  const MetricJet<N> jet = oracle.jet(p);
  const Mat<N> ginv = inverse_metric<N>(jet.g);
  const Connection<N> gamma = christoffel<N>(jet);
  const FieldJet<Mat<N>, N> s = field.jet(p);
  Vec<N> out = Vec<N>::Zero();
  for (int b = 0; b < N; ++b)
    for (int a = 0; a < N; ++a)
      for (int c = 0; c < N; ++c) {
        double cov = s.d[a](c, b);
        for (int e = 0; e < N; ++e) cov -= gamma[e](a, c) * s.value(e, b) + gamma[e](a, b) * s.value(c, e);
        out[b] += ginv(a, c) * cov;
      }
  return out;
}

/// nabla_a nabla_b f
template <int N> Mat<N> hessian(const ScalarJet<N>& f, const Connection<N>& gamma) {
  Mat<N> h = f.hess;
  for (int c = 0; c < N; ++c) h -= f.grad[c] * gamma[c];
  return 0.5 * (h + h.transpose());
}

template <int N> Mat<N> hessian(const ScalarField<N>& f, const MetricOracle<N>& oracle, const ChartPoint<N>& p) {
  return hessian<N>(f(p), christoffel<N>(oracle.jet(p)));
}

/// Positive Laplacian, -g^ab nabla_a nabla_b f.
template <int N> double laplacian(const ScalarField<N>& f, const MetricOracle<N>& oracle, const ChartPoint<N>& p) {
  const MetricJet<N> jet = oracle.jet(p);
  const Mat<N> ginv = inverse_metric<N>(jet.g);
  return -ginv.cwiseProduct(hessian<N>(f(p), christoffel<N>(jet))).sum();
}

/// |nabla_a X_b + nabla_b X_a|_g for a vector field X^a; d[c](a) = d_c X^a.
template <int N> double killing_residual(const VectorField<N>& field, const MetricOracle<N>& oracle, const ChartPoint<N>& p) {
  const MetricJet<N> jet = oracle.jet(p);
  const Mat<N> ginv = inverse_metric<N>(jet.g);
  const Connection<N> gamma = christoffel<N>(jet);
  const FieldJet<Vec<N>, N> x = field.jet(p);
  const Vec<N> xlow = jet.g * x.value;
  Mat<N> cov;  // cov(a, b) = nabla_a X_b
  for (int a = 0; a < N; ++a) {
    const Vec<N> dlow = jet.dg[a] * x.value + jet.g * x.d[a];
    for (int b = 0; b < N; ++b) {
      double v = dlow[b];
      for (int c = 0; c < N; ++c) v -= gamma[c](a, b) * xlow[c];
      cov(a, b) = v;
    }
  }
  return tensor_norm<N>(cov + cov.transpose(), ginv);
}

/// Scalar curvature as a field, differentiated by finite differences.
template <int N> RealField<N> scalar_curvature_field(const MetricOracle<N>& oracle) {
  return RealField<N>([oracle](const ChartPoint<N>& p) { return curvature<N>(oracle, p).scalar; }, oracle.domain());
}

template <int N> Sym2Field<N> trace_free_ricci_field(const MetricOracle<N>& oracle) {
  return Sym2Field<N>([oracle](const ChartPoint<N>& p) { return curvature<N>(oracle, p).ricci0; }, oracle.domain());
}

/// |div r0 - (n-2)/(2n) ds|_g, with the divergence and the gradient of s
/// evaluated from independent finite-difference jets.
template <int N> double bianchi_residual(const MetricOracle<N>& oracle, const ChartPoint<N>& p) {
  const Vec<N> div = divergence_sym2<N>(trace_free_ricci_field<N>(oracle), oracle, p);
  const FieldJet<double, N> s = scalar_curvature_field<N>(oracle).jet(p);
  Vec<N> ds;
  for (int c = 0; c < N; ++c) ds[c] = s.d[c];
  const double k = (N - 2.0) / (2.0 * N);
  return covector_norm<N>(div - k * ds, inverse_metric<N>(oracle.metric(p)));
}

}  // namespace emk
