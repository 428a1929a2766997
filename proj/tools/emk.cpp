// emk: verify members of the quartic Einstein-Maxwell family, sweep the
// family, and run the identity corpus.

#include "emk/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

int main(int argc, char** argv) {
  emk::RunConfig cfg;
  if (const char* env = std::getenv("EMK_THREADS")) {
    try {
      cfg.threads = static_cast<unsigned>(std::stoul(env));
    } catch (const std::exception&) {
      std::cerr << "EMK_THREADS must be a non-negative integer\n";
      return emk::kUsageError;
    }
  }

  CLI::App app{"Conformally Kahler Einstein-Maxwell metrics on S2 x S2"};
  app.fallthrough();
  app.require_subcommand(0, 1);
  app.set_config("--config", "", "key=value configuration file; flags override it");

  std::string grid = emk::grid_str(cfg.grid), residual_grid = emk::grid_str(cfg.residual_grid);
  double ratio = 0.0;
  bool print_config = false;

  app.add_option("--a", cfg.a, "left end of the momentum interval (0 < a < b)");
  app.add_option("--b", cfg.b, "right end of the momentum interval");
  app.add_option("--ratio-min", cfg.ratio_min, "smallest b/a of the sweep");
  app.add_option("--ratio-max", cfg.ratio_max, "largest b/a of the sweep");
  app.add_option("--ratio", ratio, "single sweep ratio b/a (sets min = max, steps = 1)");
  app.add_option("--steps", cfg.steps, "number of sweep rows");
  app.add_option("--grid", grid, "verification grid n_t,n_theta,n_u,n_theta2");
  app.add_option("--residual-grid", residual_grid, "per-row residual grid of the sweep");
  app.add_option("--tol-jet", cfg.tol_jet, "tolerance for jet-tier residuals");
  app.add_option("--tol-fd", cfg.tol_fd, "tolerance for finite-difference residuals");
  app.add_option("--tol-exact", cfg.tol_exact, "tolerance for exact-tier comparisons");
  app.add_option("--format", cfg.format, "csv or text")->check(CLI::IsMember({"csv", "text"}));
  app.add_option("--output", cfg.output, "output file (default: standard output)");
  app.add_option("--threads", cfg.threads, "worker threads, 0 = all cores");
  app.add_option("--seed", cfg.seed, "seed of the identity corpus");
  app.add_option("--samples", cfg.samples, "random forms per corpus point");
  app.add_flag("--flip-codifferential-sign", cfg.flip_codifferential_sign, "test hook: reverse the codifferential sign");
  app.add_flag("--print-config", print_config, "print the effective configuration and exit");

  auto* check = app.add_subcommand("check", "verify one family member on a grid");
  auto* sweep = app.add_subcommand("sweep", "tabulate the family over a ratio range (CSV)");
  auto* identities = app.add_subcommand("identities", "run the identity corpus");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return emk::kUsageError;
  }

  if (check->parsed()) cfg.command = "check";
  if (sweep->parsed()) cfg.command = "sweep";
  if (identities->parsed()) cfg.command = "identities";
  try {
    cfg.grid = emk::parse_grid(grid);
    cfg.residual_grid = emk::parse_grid(residual_grid);
  } catch (const emk::Error& e) {
    std::cerr << e.what() << '\n';
    return emk::kUsageError;
  }
  if (ratio != 0.0) {
    cfg.ratio_min = cfg.ratio_max = ratio;
    cfg.steps = 1;
  }

  if (print_config) {
    std::cout << "command=\"" << cfg.command << "\"\n";
    emk::write_config(std::cout, cfg);
    return emk::kPass;
  }
  if (app.get_subcommands().empty()) {
    std::cerr << app.help();
    return emk::kUsageError;
  }
  return emk::run(cfg, std::cout, std::cerr);
}
