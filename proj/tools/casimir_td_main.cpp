// casimir-td: compute Casimir forces between perfect conductors at zero and
// nonzero temperature with a time-domain (FDTD) method, alongside frequency-
// domain reference calculations on the same lattice.
//
// Subcommands:
//   run        full pipeline -> force table CSV
//   weights    dump the frequency spectrum and synthesized time weights
//   reference  dump reference integrand / Matsubara term tables
//
// Exit codes: 0 success, 1 configuration error, 2 runtime failure.
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "casimir/config.hpp"
#include "casimir/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"time-domain Casimir force calculator"};
  app.require_subcommand(1);

  casimir::RunOptions opt;
  std::string config_path;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "path to a run configuration file")->required();
    sub->add_option("--jobs", opt.jobs, "worker threads for simulation batches")
        ->check(CLI::PositiveNumber);
    sub->add_flag_function(
        "--no-timestamp", [&](std::int64_t) { opt.timestamp = false; },
        "omit the generation-time header from output files");
    sub->add_flag("--debug-dumps", opt.debug_dumps,
                  "also write raw per-simulation and combined stress traces");
  };

  CLI::App* run = app.add_subcommand("run", "compute forces and write the result table");
  CLI::App* weights = app.add_subcommand("weights", "write spectrum and time-weight tables");
  CLI::App* reference = app.add_subcommand("reference", "write reference term tables");
  add_common(run);
  add_common(weights);
  add_common(reference);

  CLI11_PARSE(app, argc, argv);

  casimir::RunConfig cfg;
  try {
    cfg = casimir::parse_config_file(config_path);
  } catch (const casimir::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (run->parsed()) return casimir::cmd_run(cfg, opt);
    if (weights->parsed()) return casimir::cmd_weights(cfg, opt);
    return casimir::cmd_reference(cfg, opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
