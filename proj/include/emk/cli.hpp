#pragma once

// Command implementations behind tools/emk. Each command writes to the given
// streams and returns an exit status: 0 pass, 1 verification failure, 2 usage
// or configuration error.

#include "emk/corpus.hpp"
#include "emk/em_check.hpp"
#include "emk/quartic_family.hpp"
#include "emk/report.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>

namespace emk {

enum ExitCode : int { kPass = 0, kVerificationFailure = 1, kUsageError = 2 };

struct RunConfig {
  std::string command = "check";
  double a = 1.0;
  double b = 2.0;
  double ratio_min = 1.001;
  double ratio_max = 100.0;
  int steps = 200;
  std::array<int, 4> grid{32, 8, 32, 8};
  std::array<int, 4> residual_grid{4, 2, 4, 2};  // per sweep row
  double tol_jet = 1e-8;
  double tol_fd = 1e-5;
  double tol_exact = 1e-12;
  std::string format = "text";
  std::string output;  // empty: standard output
  unsigned threads = 0;  // 0: all cores
  std::uint64_t seed = 20150117;
  int samples = 200;
  bool flip_codifferential_sign = false;
};

/// "32,8,32,8" -> {32, 8, 32, 8}
inline std::array<int, 4> parse_grid(const std::string& s) {
  std::array<int, 4> g{};
  std::stringstream ss(s);
  std::string item;
  std::size_t k = 0;
  while (std::getline(ss, item, ',')) {
    if (k == 4) throw InvalidParams("grid needs exactly four sizes: " + s);
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw InvalidParams("bad grid size '" + item + "'");
    }
    if (used != item.size()) throw InvalidParams("bad grid size '" + item + "'");
    g[k++] = v;
  }
  if (k != 4) throw InvalidParams("grid needs exactly four sizes: " + s);
  return g;
}

inline std::string grid_str(const std::array<int, 4>& g) {
  return std::to_string(g[0]) + ',' + std::to_string(g[1]) + ',' + std::to_string(g[2]) + ',' + std::to_string(g[3]);
}

inline void validate_grid(const std::array<int, 4>& g, const char* what) {
  if (g[0] < 4 || g[2] < 4) throw InvalidParams(std::string(what) + ": t and u sizes must be at least 4");
  if (g[1] < 1 || g[3] < 1) throw InvalidParams(std::string(what) + ": angular sizes must be at least 1");
}

/// Throws InvalidParams for anything a command cannot run with.
inline void validate(const RunConfig& c) {
  if (c.command != "check" && c.command != "sweep" && c.command != "identities")
    throw InvalidParams("unknown command '" + c.command + "'");
  if (c.format != "text" && c.format != "csv") throw InvalidParams("format must be csv or text");
  if (!(c.tol_jet > 0.0) || !(c.tol_fd > 0.0) || !(c.tol_exact > 0.0)) throw InvalidParams("tolerances must be positive");
  validate_grid(c.grid, "grid");
  validate_grid(c.residual_grid, "residual-grid");
  if (c.samples < 1) throw InvalidParams("samples must be positive");
  if (c.command == "check") validate(FamilyParams{c.a, c.b});
  if (c.command == "sweep") (void)sweep_ratios(c.ratio_min, c.ratio_max, c.steps);
}

inline GridSpec grid_spec(const std::array<int, 4>& counts) {
  GridSpec g;
  g.counts = counts;
  return g;
}

/// key=value lines accepted by --config, with the current values.
inline void write_config(std::ostream& os, const RunConfig& c) {
  const auto prec = os.precision();
  os << std::setprecision(17);
  os << "a=" << c.a << "\nb=" << c.b << "\nratio-min=" << c.ratio_min << "\nratio-max=" << c.ratio_max << "\nsteps=" << c.steps
     << "\ngrid=\"" << grid_str(c.grid) << "\"\nresidual-grid=\"" << grid_str(c.residual_grid) << "\"\ntol-jet=" << c.tol_jet
     << "\ntol-fd=" << c.tol_fd << "\ntol-exact=" << c.tol_exact << "\nformat=\"" << c.format << "\"\noutput=\"" << c.output
     << "\"\nthreads=" << c.threads << "\nseed=" << c.seed << "\nsamples=" << c.samples
     << "\nflip-codifferential-sign=" << (c.flip_codifferential_sign ? "true" : "false") << '\n';
  os.precision(prec);
}

inline int cmd_check(const RunConfig& c, std::ostream& out, std::ostream& err) {
  ResidualReport rep;
  try {
    validate(c);
    const ProductChart chart = build_chart(FamilyParams::make(c.a, c.b));
    rep = verify(chart.em_config(), grid_spec(c.grid), Tolerances{c.tol_jet, c.tol_fd, c.tol_exact}, c.threads);
  } catch (const InvalidParams& e) {
    err << e.what() << '\n';
    return kUsageError;
  } catch (const Error& e) {
    err << "verification error: " << e.what() << '\n';
    return kVerificationFailure;
  }
  if (c.format == "csv")
    write_csv(out, rep);
  else
    write_text(out, rep);
  if (!rep.pass()) {
    err << "failing:";
    for (const auto& name : rep.failing()) err << ' ' << name;
    err << '\n';
    return kVerificationFailure;
  }
  return kPass;
}

inline void write_sweep_csv(std::ostream& os, const SweepTable& t) {
  const auto prec = os.precision();
  os << std::setprecision(17);
  os << "ratio,d,c,area_sigma,area_1,yamabe,calabi,max_residual\n";
  for (const auto& r : t.rows)
    os << r.ratio << ',' << r.d << ',' << r.c << ',' << r.area_sigma << ',' << r.area_first << ',' << r.yamabe << ',' << r.calabi
       << ',' << r.max_residual << '\n';
  os.precision(prec);
}

inline int cmd_sweep(const RunConfig& c, std::ostream& out, std::ostream& err) {
  SweepTable t;
  try {
    validate(c);
    t = sweep(sweep_ratios(c.ratio_min, c.ratio_max, c.steps), grid_spec(c.residual_grid), c.threads);
  } catch (const InvalidParams& e) {
    err << e.what() << '\n';
    return kUsageError;
  } catch (const Error& e) {
    err << "sweep error: " << e.what() << '\n';
    return kVerificationFailure;
  }
  write_sweep_csv(out, t);
  if (!t.yamabe_increasing) {
    err << "yamabe column is not strictly increasing\n";
    return kVerificationFailure;
  }
  return kPass;
}

inline void write_identities(std::ostream& os, const IdentityReport& r, const std::string& format) {
  const auto prec = os.precision();
  os << std::setprecision(17);
  if (format == "csv") {
    os << "identity,max_residual,tolerance,samples,pass\n";
    for (const auto& l : r.results)
      os << l.name << ',' << l.max_residual << ',' << l.tolerance << ',' << l.samples << ',' << (l.pass() ? "true" : "false") << '\n';
  } else {
    for (const auto& l : r.results)
      os << l.name << " max=" << l.max_residual << " tol=" << l.tolerance << " samples=" << l.samples << ' '
         << (l.pass() ? "PASS" : "FAIL") << '\n';
    os << "result " << (r.pass() ? "PASS" : "FAIL") << '\n';
  }
  os.precision(prec);
}

inline int cmd_identities(const RunConfig& c, std::ostream& out, std::ostream& err) {
  IdentityReport rep;
  try {
    validate(c);
    IdentityOptions opt;
    opt.seed = c.seed;
    opt.samples = c.samples;
    opt.conventions.flip_codifferential_sign = c.flip_codifferential_sign;
    rep = run_identity_corpus(opt);
  } catch (const InvalidParams& e) {
    err << e.what() << '\n';
    return kUsageError;
  } catch (const Error& e) {
    err << "identity error: " << e.what() << '\n';
    return kVerificationFailure;
  }
  write_identities(out, rep, c.format);
  return rep.pass() ? kPass : kVerificationFailure;
}

/// Dispatch on c.command, writing to c.output when set.
inline int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  std::ofstream file;
  std::ostream* os = &out;
  if (!c.output.empty()) {
    file.open(c.output);
    if (!file) {
      err << "cannot open output file " << c.output << '\n';
      return kUsageError;
    }
    os = &file;
  }
  if (c.command == "check") return cmd_check(c, *os, err);
  if (c.command == "sweep") return cmd_sweep(c, *os, err);
  if (c.command == "identities") return cmd_identities(c, *os, err);
  err << "unknown command '" << c.command << "'\n";
  return kUsageError;
}

}  // namespace emk
