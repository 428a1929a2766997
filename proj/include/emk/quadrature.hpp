#pragma once

// Composite Gauss-Legendre quadrature with compensated panel summation.

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <functional>

namespace emk {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline constexpr unsigned kGaussPoints = 20;

/// Integral of f over [lo, hi] with `panels` equal Gauss-Legendre panels.
template <class F> double integrate(F&& f, double lo, double hi, int panels = 8) {
  using Rule = boost::math::quadrature::gauss<double, kGaussPoints>;
  const double width = (hi - lo) / panels;
  CompensatedSum total;
  for (int k = 0; k < panels; ++k) {
    const double a = lo + k * width, b = a + width;
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    // Rule::integrate maps the interval itself; evaluating the nodes directly
    // keeps the per-panel sum inside the compensated accumulator.
    const auto& x = Rule::abscissa();
    const auto& w = Rule::weights();
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] == 0.0) {
        total.add(half * w[i] * f(mid));
        continue;
      }
      total.add(half * w[i] * f(mid + half * x[i]));
      total.add(half * w[i] * f(mid - half * x[i]));
    }
  }
  return total.value();
}

/// Tensor-product rule on [x0, x1] x [y0, y1].
template <class F> double integrate2(F&& f, double x0, double x1, double y0, double y1, int panels_x = 8, int panels_y = 8) {
  return integrate([&](double x) { return integrate([&](double y) { return f(x, y); }, y0, y1, panels_y); }, x0, x1, panels_x);
}

}  // namespace emk
