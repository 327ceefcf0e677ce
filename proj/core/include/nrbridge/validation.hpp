#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nrbridge/keldysh.hpp"

namespace nrbridge {

/// One named check. `measured <= threshold` is the pass condition; a check
/// whose solver raised carries the message in `error` and never passes.
struct CheckResult {
  std::string suite;
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string detail;
  std::optional<std::string> error;
};

struct ValidationOptions {
  int fock_cutoff = 8;  // photon cutoff of the adiabatic bridge instances
  SolverOptions solver{};
  std::uint64_t seed = 20240917;
};

struct ValidationReport {
  std::vector<CheckResult> checks;

  bool all_passed() const;
  bool has_errors() const;
};

/// "lindblad", "keldysh", "bridge", "all".
const std::vector<std::string>& suite_names();

/// Throws LookupError for an unknown suite.
ValidationReport run_validation(std::string_view suite, const ValidationOptions& options = {});

}  // namespace nrbridge
