#pragma once

#include <functional>
#include <span>
#include <vector>

namespace nrbridge {

/// Panels over [-Omega, Omega], optionally extended by two semi-infinite
/// tail panels. Tails are integrated in the variable u = Omega / |w| on
/// (0, 1], which is exact for integrands with algebraic 1/w^2 decay.
struct FrequencyGrid {
  std::vector<double> breakpoints;  // ascending; front() = -Omega, back() = +Omega
  std::size_t tail_panels = 2;      // per side; 0 disables the tails

  double window() const { return breakpoints.back(); }
  std::size_t panel_count() const { return breakpoints.size() - 1; }
  /// Every panel split in half.
  FrequencyGrid refined() const;
  /// Quadrature nodes in w (tail nodes mapped back to the real axis).
  std::vector<double> nodes() const;

  /// Symmetric window [-omega, omega] with `panels` equal panels.
  static FrequencyGrid uniform(double omega, std::size_t panels, bool tails = true);
  /// Window [-omega, omega] with the given interior points (clipped,
  /// sorted, deduplicated) and panels no wider than `max_width`.
  static FrequencyGrid with_points(double omega, std::vector<double> points, double max_width,
                                   bool tails = true);
};

/// Gauss-Legendre points per panel.
inline constexpr int kNodesPerPanel = 16;

struct QuadratureOptions {
  double abs_tol = 1e-9;
  int max_doublings = 12;
};

struct QuadratureResult {
  std::vector<double> values;
  std::vector<double> errors;  // |I(2n) - I(n)| per component
  int doublings = 0;

  double max_error() const;
};

using VectorIntegrand = std::function<void(double omega, std::span<double> out)>;

/// Composite Gauss-Legendre with panel doubling until every component
/// changes by at most abs_tol. Throws AccuracyError otherwise.
QuadratureResult integrate(const VectorIntegrand& f, std::size_t components,
                           const FrequencyGrid& grid, const QuadratureOptions& options = {});

struct ScalarQuadrature {
  double value = 0.0;
  double error = 0.0;
};

ScalarQuadrature integrate(const std::function<double(double)>& f, const FrequencyGrid& grid,
                           const QuadratureOptions& options = {});

/// Single pass of the composite rule, no refinement.
std::vector<double> apply_rule(const VectorIntegrand& f, std::size_t components,
                               const FrequencyGrid& grid);

}  // namespace nrbridge
