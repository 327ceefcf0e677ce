#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nrbridge/keldysh.hpp"
#include "nrbridge/model.hpp"

namespace nrbridge {

/// Fixed model fields of a loss-current sweep, in effective units.
struct SweepModel {
  double eps_g = 0.0;
  double detuning = 0.0;
  double t_left = 0.5;
  double t_right = 0.5;
  double t_e5 = 1.0;
  double t_bath = 1.0;
  double temperature = 0.1;
  double two_fermi_velocity = 1.0;
};

/// Log-spaced drive intensities.
struct GammaGrid {
  double min = 1e-3;
  double max = 1e3;
  int count = 33;

  std::vector<double> values() const;
};

struct SweepConfig {
  SweepModel model{};
  GammaGrid gamma{};
  std::vector<double> e_nh{1.0, 2.0, 4.0};
  std::vector<double> delta_mu{0.0, 1.0, 4.0};
  std::string output;
  SolverOptions solver{};

  /// Throws ConfigError.
  void validate() const;
};

/// Effective network at drive intensity gamma = |t_eg|^2 with
/// mu_L = -mu_R = delta_mu / 2.
EffectiveModel sweep_point_model(const SweepModel& m, double gamma, double e_nh, double delta_mu);

struct SweepRecord {
  double gamma = 0.0;
  double e_nh = 1.0;
  double delta_mu = 0.0;
  double loss_current = 0.0;
  double current_left = 0.0;
  double current_right = 0.0;
  double n_g = 0.0;
  double n_e = 0.0;
  double n_5 = 0.0;
  double continuity_residual = 0.0;
  double grid_error = 0.0;
};

struct SweepResult {
  std::vector<SweepRecord> records;

  /// Records of one (e_nh, delta_mu) curve in gamma order.
  std::vector<SweepRecord> curve(double e_nh, double delta_mu) const;
};

/// Largest continuity residual accepted, relative to max(1, I_loss).
inline constexpr double kContinuityTolerance = 1e-8;

/// One sweep point. Throws AccuracyError naming the point when the solver
/// fails or the continuity residual exceeds kContinuityTolerance.
SweepRecord evaluate_point(const SweepConfig& cfg, double gamma, double e_nh, double delta_mu);

/// Cartesian sweep, ordered gamma-major, then e_nh, then delta_mu.
/// threads == 0 uses every hardware thread.
SweepResult run_sweep(const SweepConfig& cfg, unsigned threads = 1);

inline constexpr std::string_view kCsvHeader =
    "gamma,e_nh,delta_mu,I_loss,I_L,I_R,n_g,n_e,n_5,continuity_residual,grid_error";

/// Shortest round-trip-safe rendering: 17 significant digits.
std::string format_double(double x);
void write_csv(std::ostream& os, const SweepResult& result);

struct ZenoPeak {
  double gamma = 0.0;
  double loss_current = 0.0;
};

/// Grid argmax refined by golden-section search in log(gamma) over the
/// bracketing grid interval. Needs >= 8 points; throws NoPeakError when the
/// maximum sits at either end of the grid.
ZenoPeak find_zeno_peak(std::span<const double> gammas, std::span<const double> values,
                        const std::function<double(double)>& evaluate, double log_tolerance = 1e-8);

ZenoPeak find_zeno_peak(const SweepResult& result, const SweepConfig& cfg, double e_nh,
                        double delta_mu);

}  // namespace nrbridge
