#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace nrbridge::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kSolverError = 3,
  kValidationFailure = 4,
};

struct CommonOptions {
  std::string config;
  std::string out;
  unsigned threads = 1;
  std::optional<double> tolerance;
  std::optional<int> fock_cutoff;
};

struct PeakOptions {
  std::vector<double> e_nh;      // empty: every configured value
  std::vector<double> delta_mu;  // empty: every configured value
};

int run_sweep_command(const CommonOptions& opt);
int run_peak_command(const CommonOptions& opt, const PeakOptions& peak);
int run_bridge_command(const CommonOptions& opt, bool ladder);
int run_validate_command(const CommonOptions& opt, const std::string& suite);

/// Maps library exceptions to exit codes and prints the diagnostic.
int guarded(const std::function<int()>& body);

}  // namespace nrbridge::cli
