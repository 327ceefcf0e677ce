#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "nrbridge/bridge.hpp"
#include "nrbridge/config.hpp"
#include "nrbridge/errors.hpp"
#include "nrbridge/sweep.hpp"
#include "nrbridge/validation.hpp"

namespace nrbridge::cli {

namespace {

using nlohmann::json;

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file " + path);
  out << text;
  if (!out) throw ConfigError("failed writing output file " + path);
}

SweepConfig load_sweep(const CommonOptions& opt) {
  if (opt.config.empty()) throw ConfigError("--config is required");
  SweepConfig cfg = parse_sweep_config(read_text_file(opt.config));
  if (opt.tolerance) {
    cfg.solver.abs_tol = *opt.tolerance;
    cfg.validate();
  }
  return cfg;
}

json report_json(const BridgeReport& r) {
  json j{{"regime", regime_name(r.regime)},
         {"e_nh", number(r.e_nh)},
         {"loss_lindblad", number(r.loss_lindblad)},
         {"loss_keldysh", number(r.loss_keldysh)},
         {"occupations_lindblad", r.occupations_lindblad},
         {"occupations_keldysh", r.occupations_keldysh},
         {"relative_deviation", number(r.relative_deviation)},
         {"occupation_deviation", number(r.occupation_deviation)},
         {"photon_number", number(r.photon_number)},
         {"atom_balance_residual", number(r.atom_balance_residual)},
         {"cutoff_shift", number(r.cutoff_shift)},
         {"grid_shift", number(r.grid_shift)},
         {"passed", r.passed}};
  if (r.loss_lyapunov) j["loss_lyapunov"] = number(*r.loss_lyapunov);
  if (r.occupations_lyapunov) j["occupations_lyapunov"] = *r.occupations_lyapunov;
  return j;
}

}  // namespace

int run_sweep_command(const CommonOptions& opt) {
  const SweepConfig cfg = load_sweep(opt);
  const SweepResult result = run_sweep(cfg, opt.threads);
  std::ostringstream os;
  write_csv(os, result);
  emit(opt.out.empty() ? cfg.output : opt.out, os.str());
  return kOk;
}

int run_peak_command(const CommonOptions& opt, const PeakOptions& peak) {
  SweepConfig cfg = load_sweep(opt);
  if (!peak.e_nh.empty()) cfg.e_nh = peak.e_nh;
  if (!peak.delta_mu.empty()) cfg.delta_mu = peak.delta_mu;
  cfg.validate();
  const SweepResult result = run_sweep(cfg, opt.threads);
  json peaks = json::array();
  for (double e : cfg.e_nh) {
    for (double d : cfg.delta_mu) {
      const ZenoPeak p = find_zeno_peak(result, cfg, e, d);
      peaks.push_back({{"e_nh", e}, {"delta_mu", d}, {"gamma", number(p.gamma)},
                       {"loss_current", number(p.loss_current)}});
    }
  }
  emit(opt.out, json{{"peaks", peaks}}.dump(2) + "\n");
  return kOk;
}

int run_bridge_command(const CommonOptions& opt, bool ladder) {
  if (opt.config.empty()) throw ConfigError("--config is required");
  BridgeInstance inst = parse_bridge_config(read_text_file(opt.config));
  if (opt.fock_cutoff) inst.fock_cutoff = *opt.fock_cutoff;
  BridgeOptions bopt;
  if (opt.tolerance) bopt.solver.abs_tol = *opt.tolerance;
  json out;
  bool passed = true;
  if (ladder) {
    const double ratios[] = {5.0, 10.0, 20.0};
    const LadderReport l = compare_ladder(inst, ratios, bopt);
    json reports = json::array();
    for (const auto& r : l.reports) {
      reports.push_back(report_json(r));
      passed = passed && r.passed;
    }
    out = {{"ratios", l.ratios}, {"reports", reports}, {"strictly_decreasing", l.strictly_decreasing}};
  } else {
    const BridgeReport r = compare(inst, bopt);
    out = report_json(r);
    passed = r.passed;
  }
  emit(opt.out, out.dump(2) + "\n");
  return passed ? kOk : kValidationFailure;
}

int run_validate_command(const CommonOptions& opt, const std::string& suite) {
  ValidationOptions vopt;
  if (opt.fock_cutoff) vopt.fock_cutoff = *opt.fock_cutoff;
  if (opt.tolerance) vopt.solver.abs_tol = *opt.tolerance;
  const ValidationReport report = run_validation(suite, vopt);
  json checks = json::array();
  for (const auto& c : report.checks) {
    json j{{"suite", c.suite},       {"name", c.name},     {"passed", c.passed},
           {"measured", number(c.measured)}, {"threshold", number(c.threshold)}, {"detail", c.detail}};
    if (c.error) j["error"] = *c.error;
    checks.push_back(std::move(j));
    std::cerr << (c.passed ? "PASS " : (c.error ? "ERROR " : "FAIL ")) << c.suite << "/" << c.name;
    if (c.error) {
      std::cerr << ": " << *c.error;
    } else {
      std::cerr << ": " << c.measured << " (limit " << c.threshold << ")";
    }
    std::cerr << "\n";
  }
  const bool ok = report.all_passed();
  emit(opt.out, json{{"suite", suite}, {"passed", ok}, {"checks", checks}}.dump(2) + "\n");
  if (ok) return kOk;
  return report.has_errors() ? kSolverError : kValidationFailure;
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const LookupError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const DomainError& e) {
    std::cerr << "invalid parameters: " << e.what() << "\n";
    return kConfigError;
  } catch (const Error& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kSolverError;
  }
}

}  // namespace nrbridge::cli
