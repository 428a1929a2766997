#pragma once

// Fields over a chart with first-derivative jets.
//
// A field either supplies its partials in closed form or falls back to
// central differences with one level of Richardson extrapolation:
//   D(h)  = (f(p + h) - f(p - h)) / 2h
//   df   ~= (4 D(h/2) - D(h)) / 3          (error O(h^4))
// The default step along each axis is 4e-4 of the domain extent: near the
// roundoff/truncation balance for O(h^4), and inside the 1e-3 grid margin.

#include "emk/core.hpp"
#include "emk/jet.hpp"

#include <functional>
#include <optional>
#include <utility>

namespace emk {

template <class V, int N> struct FieldJet {
  V value;
  std::array<V, N> d;  // d[c] = partial along coordinate c
};

template <int N> std::array<double, N> default_steps(const Domain<N>& dom) {
  std::array<double, N> s{};
  for (int i = 0; i < N; ++i) {
    const double ext = dom.extent(i);
    s[static_cast<std::size_t>(i)] = std::isfinite(ext) ? 4e-4 * ext : 1e-4;
  }
  return s;
}

template <class V, int N> class Field {
 public:
  using ValueFn = std::function<V(const ChartPoint<N>&)>;
  using JetFn = std::function<FieldJet<V, N>(const ChartPoint<N>&)>;

  Field() = default;

  /// Finite-difference backed field.
  Field(ValueFn value, Domain<N> domain)
      : value_(std::move(value)), domain_(domain), steps_(default_steps(domain)) {}

  Field(ValueFn value, Domain<N> domain, std::array<double, N> steps)
      : value_(std::move(value)), domain_(domain), steps_(steps) {}

  /// Field with closed-form partials.
  Field(ValueFn value, JetFn jet, Domain<N> domain)
      : value_(std::move(value)), jet_(std::move(jet)), domain_(domain), steps_(default_steps(domain)) {}

  V operator()(const ChartPoint<N>& p) const { return value_(p); }

  FieldJet<V, N> jet(const ChartPoint<N>& p) const {
    if (jet_) return jet_(p);
    return fd_jet(p);
  }

  FieldJet<V, N> fd_jet(const ChartPoint<N>& p) const {
    FieldJet<V, N> out{value_(p), {}};
    for (int c = 0; c < N; ++c) {
      const double h = steps_[static_cast<std::size_t>(c)];
      const ChartPoint<N> far_lo = p.shifted(c, -h), far_hi = p.shifted(c, h);
      if (!domain_.contains(far_lo) || !domain_.contains(far_hi))
        throw DomainBoundary("finite-difference stencil leaves the chart at " + p.str());
      const V f_hi = value_(far_hi), f_lo = value_(far_lo);
      const V n_hi = value_(p.shifted(c, 0.5 * h)), n_lo = value_(p.shifted(c, -0.5 * h));
      const V wide = (f_hi - f_lo) * (1.0 / (2.0 * h));
      const V narrow = (n_hi - n_lo) * (1.0 / h);
      out.d[static_cast<std::size_t>(c)] = (narrow * 4.0 - wide) * (1.0 / 3.0);
    }
    return out;
  }

  bool has_closed_form_jet() const { return static_cast<bool>(jet_); }
  const Domain<N>& domain() const { return domain_; }
  const std::array<double, N>& steps() const { return steps_; }

 private:
  ValueFn value_;
  JetFn jet_;
  Domain<N> domain_ = Domain<N>::unbounded();
  std::array<double, N> steps_{};
};

template <int N> using VectorField = Field<Vec<N>, N>;
template <int N> using Sym2Field = Field<Mat<N>, N>;
template <int N> using RealField = Field<double, N>;

/// Scalar with exact first and second partials at a point.
template <int N> struct ScalarJet {
  double value = 0.0;
  Vec<N> grad = Vec<N>::Zero();
  Mat<N> hess = Mat<N>::Zero();
};

template <int N> using ScalarField = std::function<ScalarJet<N>(const ChartPoint<N>&)>;

/// Wrap a generic callable `f(const std::array<T, N>&) -> T` as a scalar
/// field whose jets come from second-order dual numbers.
template <int N, class F> ScalarField<N> dual_scalar_field(F f) {
  return [f](const ChartPoint<N>& p) {
    const Jet2<N> j = f(seed(p));
    return ScalarJet<N>{j.v, j.d, j.h};
  };
}

template <int N> ScalarField<N> constant_scalar_field(double c) {
  return [c](const ChartPoint<N>&) { return ScalarJet<N>{c, Vec<N>::Zero(), Mat<N>::Zero()}; };
}

/// The coordinate function x^axis.
template <int N> ScalarField<N> coordinate_field(int axis) {
  return [axis](const ChartPoint<N>& p) {
    ScalarJet<N> s;
    s.value = p.x[static_cast<std::size_t>(axis)];
    s.grad[axis] = 1.0;
    return s;
  };
}

}  // namespace emk
