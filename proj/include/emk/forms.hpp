#pragma once

// Two-forms on oriented Riemannian 4-charts.
//
// Storage: six independent components in the basis order
//   dx0^dx1, dx0^dx2, dx0^dx3, dx1^dx2, dx2^dx3, dx1^dx3
// so antisymmetry holds structurally.
//
// Conventions:
//   |F|^2        = 1/2 F_ab F^ab            (a Kahler form has |w| = sqrt 2)
//   (*F)_ab      = 1/2 eps_abcd F^cd,       eps = orientation * sqrt(det g) [abcd]
//   (F o G)_jk   = F_jl g^lm G_mk
//   (dF)_abc     = d_a F_bc + d_b F_ca + d_c F_ab
//   (*A)_d       = 1/6 A^abc eps_abcd       for a 3-form A
//   delta F      = - * d * F  =  - nabla^a F_ab
// Worked example: w = dt^dtheta + du^dtheta2 has constant components, so
// every term of dw vanishes; F = t du^dtheta2 has (dF)_{t u theta2} = 1.

#include "emk/core.hpp"
#include "emk/curvature.hpp"
#include "emk/field.hpp"
#include "emk/metric.hpp"

#include <utility>

namespace emk {

class TwoForm {
 public:
  static constexpr std::array<std::pair<int, int>, 6> kBasis{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {2, 3}, {1, 3}}};

  TwoForm() { c_.fill(0.0); }
  explicit TwoForm(const std::array<double, 6>& c) : c_(c) {}

  /// Antisymmetric part of m, read as components F_ab.
  static TwoForm from_matrix(const Mat<4>& m) {
    TwoForm f;
    for (std::size_t k = 0; k < 6; ++k) {
      const auto [a, b] = kBasis[k];
      f.c_[k] = 0.5 * (m(a, b) - m(b, a));
    }
    return f;
  }

  /// Elementary form dx^a ^ dx^b (a != b).
  static TwoForm basis(int a, int b) {
    TwoForm f;
    f.set(a, b, 1.0);
    return f;
  }

  Mat<4> matrix() const {
    Mat<4> m = Mat<4>::Zero();
    for (std::size_t k = 0; k < 6; ++k) {
      const auto [a, b] = kBasis[k];
      m(a, b) = c_[k];
      m(b, a) = -c_[k];
    }
    return m;
  }

  double operator()(int a, int b) const {
    if (a == b) return 0.0;
    const auto [k, sign] = slot(a, b);
    return sign * c_[k];
  }

  void set(int a, int b, double v) {
    const auto [k, sign] = slot(a, b);
    c_[k] = sign * v;
  }

  const std::array<double, 6>& components() const { return c_; }

  double max_abs() const {
    double m = 0.0;
    for (double v : c_) m = std::max(m, std::abs(v));
    return m;
  }

  TwoForm& operator+=(const TwoForm& o) {
    for (std::size_t k = 0; k < 6; ++k) c_[k] += o.c_[k];
    return *this;
  }
  TwoForm& operator-=(const TwoForm& o) {
    for (std::size_t k = 0; k < 6; ++k) c_[k] -= o.c_[k];
    return *this;
  }
  TwoForm& operator*=(double s) {
    for (double& v : c_) v *= s;
    return *this;
  }
  friend TwoForm operator+(TwoForm a, const TwoForm& b) { return a += b; }
  friend TwoForm operator-(TwoForm a, const TwoForm& b) { return a -= b; }
  friend TwoForm operator-(TwoForm a) { return a *= -1.0; }
  friend TwoForm operator*(TwoForm a, double s) { return a *= s; }
  friend TwoForm operator*(double s, TwoForm a) { return a *= s; }

 private:
  static std::pair<std::size_t, double> slot(int a, int b) {
    const int lo = std::min(a, b), hi = std::max(a, b);
    for (std::size_t k = 0; k < 6; ++k)
      if (kBasis[k].first == lo && kBasis[k].second == hi) return {k, a < b ? 1.0 : -1.0};
    throw Error("two-form index out of range");
  }

  std::array<double, 6> c_{};
};

/// 3-form stored by its omitted index: c[k] = A_{ijl} with {i < j < l} = {0..3} \ {k}.
class ThreeForm {
 public:
  ThreeForm() { c_.fill(0.0); }

  double operator()(int a, int b, int c) const {
    const int s = perm_sign(a, b, c);
    if (s == 0) return 0.0;
    return s * c_[static_cast<std::size_t>(6 - a - b - c)];
  }
  double& omitted(int k) { return c_[static_cast<std::size_t>(k)]; }
  double omitted(int k) const { return c_[static_cast<std::size_t>(k)]; }

  double max_abs() const {
    double m = 0.0;
    for (double v : c_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  static int perm_sign(int a, int b, int c) {
    if (a == b || b == c || a == c) return 0;
    int s = 1;
    if (a > b) s = -s;
    if (a > c) s = -s;
    if (b > c) s = -s;
    return s;
  }
  std::array<double, 4> c_{};
};

inline int levi_civita(int a, int b, int c, int d) {
  const int idx[4] = {a, b, c, d};
  int s = 1;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      if (idx[i] == idx[j]) return 0;
      if (idx[i] > idx[j]) s = -s;
    }
  return s;
}

/// Orientation relative to the coordinate order; +1 means dx0^dx1^dx2^dx3 > 0.
struct Orientation {
  int sign = 1;
};

/// Metric data needed by the pointwise form algebra.
struct FormMetric {
  Mat<4> g;
  Mat<4> ginv;
  double sqrt_det = 1.0;

  explicit FormMetric(const Mat<4>& metric) : g(metric), ginv(inverse_metric<4>(metric)), sqrt_det(std::sqrt(metric.determinant())) {}
};

inline Mat<4> raise_both(const TwoForm& f, const Mat<4>& ginv) { return ginv * f.matrix() * ginv; }

inline TwoForm hodge_star(const FormMetric& m, Orientation orient, const TwoForm& f) {
  const Mat<4> up = raise_both(f, m.ginv);
  TwoForm out;
  for (const auto& [a, b] : TwoForm::kBasis) {
    double v = 0.0;
    for (int c = 0; c < 4; ++c)
      for (int d = 0; d < 4; ++d) v += levi_civita(a, b, c, d) * up(c, d);
    out.set(a, b, 0.5 * orient.sign * m.sqrt_det * v);
  }
  return out;
}

inline TwoForm hodge_star(const Mat<4>& g, Orientation orient, const TwoForm& f) { return hodge_star(FormMetric(g), orient, f); }

struct SelfDualSplit {
  TwoForm plus;
  TwoForm minus;
};

inline SelfDualSplit sd_asd_split(const FormMetric& m, Orientation orient, const TwoForm& f) {
  const TwoForm star = hodge_star(m, orient, f);
  return {0.5 * (f + star), 0.5 * (f - star)};
}

inline SelfDualSplit sd_asd_split(const Mat<4>& g, Orientation orient, const TwoForm& f) { return sd_asd_split(FormMetric(g), orient, f); }

/// (F o G)_jk = F_jl g^lm G_mk
inline Mat<4> compose(const TwoForm& f, const TwoForm& h, const Mat<4>& ginv) { return f.matrix() * ginv * h.matrix(); }

/// <F, G> = 1/2 F_ab G^ab
inline double form_inner(const TwoForm& f, const TwoForm& h, const Mat<4>& ginv) {
  return 0.5 * raise_both(f, ginv).cwiseProduct(h.matrix()).sum();
}

inline double form_norm(const TwoForm& f, const Mat<4>& ginv) { return std::sqrt(std::max(0.0, form_inner(f, f, ginv))); }

/// |A|^2 = 1/6 A_abc A^abc
inline double three_form_norm(const ThreeForm& a, const Mat<4>& ginv) {
  double low[4][4][4], t1[4][4][4], t2[4][4][4];
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) low[i][j][k] = a(i, j, k);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) {
        double v = 0.0;
        for (int l = 0; l < 4; ++l) v += ginv(i, l) * low[l][j][k];
        t1[i][j][k] = v;
      }
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) {
        double v = 0.0;
        for (int l = 0; l < 4; ++l) v += ginv(j, l) * t1[i][l][k];
        t2[i][j][k] = v;
      }
  double sum = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) {
        double v = 0.0;
        for (int l = 0; l < 4; ++l) v += ginv(k, l) * t2[i][j][l];
        sum += v * low[i][j][k];
      }
  return std::sqrt(std::max(0.0, sum / 6.0));
}

/// (*A)_d = 1/6 A^abc eps_abcd
inline Vec<4> hodge_star(const FormMetric& m, Orientation orient, const ThreeForm& a) {
  Vec<4> out = Vec<4>::Zero();
  // Only the ordered triple complementary to d contributes; the 1/6 cancels the 3! orderings.
  for (int d = 0; d < 4; ++d)
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        for (int k = j + 1; k < 4; ++k) {
          if (i == d || j == d || k == d) continue;
          double up = 0.0;
          for (int p = 0; p < 4; ++p)
            for (int q = 0; q < 4; ++q)
              for (int r = 0; r < 4; ++r) {
                const double comp = a(p, q, r);
                if (comp == 0.0) continue;
                up += m.ginv(i, p) * m.ginv(j, q) * m.ginv(k, r) * comp;
              }
          out[d] += up * levi_civita(i, j, k, d);
        }
  return orient.sign * m.sqrt_det * out;
}

using TwoFormField = Field<TwoForm, 4>;

inline TwoFormField constant_form_field(const TwoForm& f, Domain<4> domain = Domain<4>::unbounded()) {
  return TwoFormField([f](const ChartPoint<4>&) { return f; },
                      [f](const ChartPoint<4>&) { return FieldJet<TwoForm, 4>{f, {}}; }, domain);
}

inline ThreeForm exterior_derivative(const FieldJet<TwoForm, 4>& j) {
  ThreeForm out;
  for (int k = 0; k < 4; ++k) {
    int idx[3], n = 0;
    for (int i = 0; i < 4; ++i)
      if (i != k) idx[n++] = i;
    const int a = idx[0], b = idx[1], c = idx[2];
    out.omitted(k) = j.d[a](b, c) + j.d[b](c, a) + j.d[c](a, b);
  }
  return out;
}

inline ThreeForm exterior_derivative(const TwoFormField& field, const ChartPoint<4>& p) { return exterior_derivative(field.jet(p)); }

/// The field *F with respect to the oracle's metric.
inline TwoFormField star_field(const TwoFormField& field, const MetricOracle<4>& oracle, Orientation orient) {
  return TwoFormField(
      [field, oracle, orient](const ChartPoint<4>& p) { return hodge_star(oracle.metric(p), orient, field(p)); }, field.domain(),
      field.steps());
}

/// Hooks for negative controls; the defaults are the documented conventions.
struct Conventions {
  bool flip_codifferential_sign = false;
};

/// delta F = - * d * F
inline Vec<4> codifferential(const TwoFormField& field, const MetricOracle<4>& oracle, Orientation orient, const ChartPoint<4>& p,
                             Conventions conv = {}) {
  const ThreeForm dstar = exterior_derivative(star_field(field, oracle, orient), p);
  const double sign = conv.flip_codifferential_sign ? 1.0 : -1.0;
  return sign * hodge_star(FormMetric(oracle.metric(p)), orient, dstar);
}

/// (div F)_b = nabla^a F_ab, computed from the connection.
inline Vec<4> divergence_two_form(const TwoFormField& field, const MetricOracle<4>& oracle, const ChartPoint<4>& p) {
  const MetricJet<4> jet = oracle.jet(p);
  const Mat<4> ginv = inverse_metric<4>(jet.g);
  const Connection<4> gamma = christoffel<4>(jet);
  const FieldJet<TwoForm, 4> f = field.jet(p);
  Vec<4> out = Vec<4>::Zero();
  for (int b = 0; b < 4; ++b)
    for (int a = 0; a < 4; ++a)
      for (int c = 0; c < 4; ++c) {
        double cov = f.d[c](a, b);
        for (int e = 0; e < 4; ++e) cov -= gamma[e](c, a) * f.value(e, b) + gamma[e](c, b) * f.value(a, e);
        out[b] += ginv(a, c) * cov;
      }
  return out;
}

/// J^a_b as a matrix acting on column vectors.
struct AlmostComplexStructure {
  Mat<4> j = Mat<4>::Zero();

  /// J with w = g(J., .), i.e. J^a_b = g^ac w_bc.
  static AlmostComplexStructure from_kahler_form(const Mat<4>& ginv, const TwoForm& w) {
    return {-ginv * w.matrix()};
  }

  double square_defect() const { return (j * j + Mat<4>::Identity()).cwiseAbs().maxCoeff(); }
  double compatibility_defect(const Mat<4>& g) const { return (j.transpose() * g * j - g).cwiseAbs().maxCoeff(); }
};

/// S(J., J.) for a bilinear form S.
inline Mat<4> j_conjugate(const Mat<4>& s, const AlmostComplexStructure& J) { return J.j.transpose() * s * J.j; }

/// |S - S(J., J.)|_g
inline double j_invariance_defect(const Mat<4>& s, const AlmostComplexStructure& J, const Mat<4>& ginv) {
  return tensor_norm<4>(s - j_conjugate(s, J), ginv);
}

/// S = phi(., J.)
inline Mat<4> jinvariant_from_form(const TwoForm& phi, const AlmostComplexStructure& J) { return phi.matrix() * J.j; }

/// The anti-self-dual phi with S = phi(., J.) for a trace-free J-invariant
/// symmetric S. `tol` bounds the J-invariance defect relative to max(1, |S|).
inline TwoForm asd_from_jinvariant(const Mat<4>& g, const AlmostComplexStructure& J, const Mat<4>& s, double tol = 1e-8) {
  const Mat<4> ginv = inverse_metric<4>(g);
  const double scale = std::max(1.0, tensor_norm<4>(s, ginv));
  const double defect = j_invariance_defect(s, J, ginv);
  if (defect > tol * scale)
    throw NotJInvariant("symmetric tensor is not J-invariant (defect " + std::to_string(defect) + ")");
  return TwoForm::from_matrix(-s * J.j);
}

/// X = J grad f with closed-form partials, for a Kahler form with constant
/// chart components.
inline VectorField<4> hamiltonian_vector_field(const MetricOracle<4>& oracle, const TwoForm& kahler, const ScalarField<4>& f) {
  const Mat<4> w = kahler.matrix();
  auto jet = [oracle, w, f](const ChartPoint<4>& p) {
    const MetricJet<4> m = oracle.jet(p);
    const ScalarJet<4> fj = f(p);
    const Mat<4> ginv = inverse_metric<4>(m.g);
    FieldJet<Vec<4>, 4> out;
    out.value = -ginv * w * ginv * fj.grad;
    for (int e = 0; e < 4; ++e) {
      const Mat<4> dginv = -ginv * m.dg[e] * ginv;
      out.d[e] = -(dginv * w * ginv * fj.grad + ginv * w * dginv * fj.grad + ginv * w * ginv * fj.hess.col(e));
    }
    return out;
  };
  return VectorField<4>([jet](const ChartPoint<4>& p) { return jet(p).value; }, jet, oracle.domain());
}

}  // namespace emk
