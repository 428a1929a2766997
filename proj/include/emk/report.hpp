#pragma once

// Residual reports: one line per checked equation, serializable as text or CSV.

#include "emk/core.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <string>
#include <vector>

namespace emk {

/// Which numerical route a residual goes through; sets its default tolerance.
enum class Tier { Jet, FiniteDifference, Exact };

inline const char* tier_name(Tier t) {
  switch (t) {
    case Tier::Jet: return "jet";
    case Tier::FiniteDifference: return "fd";
    case Tier::Exact: return "exact";
  }
  return "?";
}

struct Tolerances {
  double jet = 1e-8;
  double fd = 1e-5;
  double exact = 1e-12;

  double for_tier(Tier t) const {
    switch (t) {
      case Tier::Jet: return jet;
      case Tier::FiniteDifference: return fd;
      case Tier::Exact: return exact;
    }
    return 0.0;
  }
};

struct ResidualLine {
  std::string equation;
  Tier tier = Tier::Jet;
  double max = 0.0;
  double mean = 0.0;
  std::size_t count = 0;
  double tolerance = 0.0;

  bool pass() const { return count > 0 && max < tolerance; }
};

struct GridSpec {
  std::array<int, 4> counts{32, 8, 32, 8};
  /// Distance kept from each non-periodic boundary, as a fraction of the extent.
  double margin_fraction = 1e-3;

  std::size_t size() const {
    std::size_t n = 1;
    for (int c : counts) n *= static_cast<std::size_t>(c);
    return n;
  }

  /// Uniform samples per axis: closed interval shrunk by the margin on
  /// bounded axes, (0, 2pi]-style offsets on periodic ones. Lexicographic
  /// order with the last axis fastest.
  std::vector<ChartPoint<4>> points(const Domain<4>& dom) const {
    std::array<std::vector<double>, 4> axis;
    for (std::size_t i = 0; i < 4; ++i) {
      const int n = counts[i];
      const double lo = dom.lower[i], hi = dom.upper[i];
      for (int k = 0; k < n; ++k) {
        if (dom.periodic[i]) {
          axis[i].push_back(lo + (hi - lo) * (k + 1) / n);
        } else {
          const double m = margin_fraction * (hi - lo);
          axis[i].push_back(n == 1 ? 0.5 * (lo + hi) : lo + m + (hi - lo - 2.0 * m) * k / (n - 1));
        }
      }
    }
    std::vector<ChartPoint<4>> pts;
    pts.reserve(size());
    for (double x0 : axis[0])
      for (double x1 : axis[1])
        for (double x2 : axis[2])
          for (double x3 : axis[3]) pts.push_back(ChartPoint<4>{{x0, x1, x2, x3}});
    return pts;
  }
};

struct ResidualReport {
  GridSpec grid;
  Tolerances tolerances;
  std::vector<ResidualLine> lines;
  double scalar_median = 0.0;
  double scalar_spread = 0.0;

  bool pass() const {
    return !lines.empty() && std::all_of(lines.begin(), lines.end(), [](const ResidualLine& l) { return l.pass(); });
  }

  std::vector<std::string> failing() const {
    std::vector<std::string> out;
    for (const auto& l : lines)
      if (!l.pass()) out.push_back(l.equation);
    return out;
  }

  const ResidualLine* find(const std::string& equation) const {
    for (const auto& l : lines)
      if (l.equation == equation) return &l;
    return nullptr;
  }
};

inline void write_csv(std::ostream& os, const ResidualReport& r) {
  const auto flags = os.flags();
  const auto prec = os.precision();
  os << std::setprecision(17);
  os << "equation,max_residual,mean_residual,tolerance,pass\n";
  for (const auto& l : r.lines)
    os << l.equation << ',' << l.max << ',' << l.mean << ',' << l.tolerance << ',' << (l.pass() ? "true" : "false") << '\n';
  os.flags(flags);
  os.precision(prec);
}

/// Text report:
///   grid <n0>x<n1>x<n2>x<n3> points <N>
///   scalar_curvature median <m> spread <s>
///   <equation> tier=<tier> max=<x> mean=<x> tol=<x> PASS|FAIL
///   result PASS|FAIL
inline void write_text(std::ostream& os, const ResidualReport& r) {
  const auto flags = os.flags();
  const auto prec = os.precision();
  os << std::setprecision(17);
  os << "grid " << r.grid.counts[0] << 'x' << r.grid.counts[1] << 'x' << r.grid.counts[2] << 'x' << r.grid.counts[3]
     << " points " << r.grid.size() << '\n';
  os << "scalar_curvature median " << r.scalar_median << " spread " << r.scalar_spread << '\n';
  for (const auto& l : r.lines)
    os << l.equation << " tier=" << tier_name(l.tier) << " max=" << l.max << " mean=" << l.mean << " tol=" << l.tolerance
       << ' ' << (l.pass() ? "PASS" : "FAIL") << '\n';
  os << "result " << (r.pass() ? "PASS" : "FAIL") << '\n';
  os.flags(flags);
  os.precision(prec);
}

}  // namespace emk
