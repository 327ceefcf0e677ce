#include <CLI11.hpp>
#include <string>

#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace nrbridge::cli;
  CLI::App app{"Lindblad and Keldysh steady-state solvers for a dissipative lambda-system junction"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "nrbridge 0.1.0");

  CommonOptions common;
  PeakOptions peak;
  std::string suite;
  bool ladder = false;

  const auto add_common = [&](CLI::App* cmd, bool needs_config) {
    auto* c = cmd->add_option("--config", common.config, "Config file");
    if (needs_config) c->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", common.out, "Output file (default: stdout)");
    cmd->add_option("--tolerance", common.tolerance, "Absolute solver tolerance")->check(CLI::PositiveNumber);
  };

  auto* sweep = app.add_subcommand("sweep", "Tabulate the loss current over the configured grid as CSV");
  add_common(sweep, true);
  sweep->add_option("--threads", common.threads, "Worker threads (0 = all cores)");

  auto* peak_cmd = app.add_subcommand("peak", "Locate the maximum of each loss-current curve");
  add_common(peak_cmd, true);
  peak_cmd->add_option("--threads", common.threads, "Worker threads (0 = all cores)");
  peak_cmd->add_option("--e-nh", peak.e_nh, "Restrict to these enhancement values");
  peak_cmd->add_option("--delta-mu", peak.delta_mu, "Restrict to these bias values");

  auto* bridge = app.add_subcommand("bridge", "Compare the master-equation and Green-function descriptions");
  add_common(bridge, true);
  bridge->add_option("--fock-cutoff", common.fock_cutoff, "Photon Fock cutoff")->check(CLI::PositiveNumber);
  bridge->add_flag("--ladder", ladder, "Run the adiabatic ladder at cavity loss 5, 10, 20 x max coupling");

  auto* validate = app.add_subcommand("validate", "Run an invariant suite and write a JSON report");
  validate->add_option("suite", suite, "lindblad, keldysh, bridge or all")->required();
  add_common(validate, false);
  validate->add_option("--fock-cutoff", common.fock_cutoff, "Photon Fock cutoff of the bridge checks")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  return guarded([&] {
    if (*sweep) return run_sweep_command(common);
    if (*peak_cmd) return run_peak_command(common, peak);
    if (*bridge) return run_bridge_command(common, ladder);
    return run_validate_command(common, suite);
  });
}
