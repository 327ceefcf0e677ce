#include "nrbridge/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <sstream>

#include "nrbridge/errors.hpp"

namespace nrbridge {

namespace {

struct Rule {
  std::vector<double> x;  // on [-1, 1]
  std::vector<double> w;
};

const Rule& legendre_rule() {
  static const Rule rule = [] {
    using G = boost::math::quadrature::gauss<double, kNodesPerPanel>;
    Rule r;
    const auto& a = G::abscissa();
    const auto& w = G::weights();
    // Boost stores the non-negative half; 0 is present only for odd orders.
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0.0) {
        r.x.push_back(0.0);
        r.w.push_back(w[i]);
        continue;
      }
      r.x.push_back(-a[i]);
      r.w.push_back(w[i]);
      r.x.push_back(a[i]);
      r.w.push_back(w[i]);
    }
    return r;
  }();
  return rule;
}

template <class Visit>
void for_each_node(const FrequencyGrid& grid, Visit&& visit) {
  const Rule& rule = legendre_rule();
  for (std::size_t p = 0; p + 1 < grid.breakpoints.size(); ++p) {
    const double a = grid.breakpoints[p];
    const double b = grid.breakpoints[p + 1];
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    for (std::size_t k = 0; k < rule.x.size(); ++k) visit(mid + half * rule.x[k], half * rule.w[k]);
  }
  if (grid.tail_panels == 0) return;
  const double omega = grid.window();
  const double du = 1.0 / static_cast<double>(grid.tail_panels);
  for (std::size_t p = 0; p < grid.tail_panels; ++p) {
    const double half = 0.5 * du;
    const double mid = (static_cast<double>(p) + 0.5) * du;
    for (std::size_t k = 0; k < rule.x.size(); ++k) {
      const double u = mid + half * rule.x[k];
      const double jac = half * rule.w[k] * omega / (u * u);
      visit(-omega / u, jac);
      visit(omega / u, jac);
    }
  }
}

}  // namespace

double QuadratureResult::max_error() const {
  double e = 0.0;
  for (double x : errors) e = std::max(e, x);
  return e;
}

FrequencyGrid FrequencyGrid::refined() const {
  FrequencyGrid out;
  out.tail_panels = 2 * tail_panels;
  out.breakpoints.reserve(2 * breakpoints.size());
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    out.breakpoints.push_back(breakpoints[i]);
    out.breakpoints.push_back(0.5 * (breakpoints[i] + breakpoints[i + 1]));
  }
  out.breakpoints.push_back(breakpoints.back());
  return out;
}

std::vector<double> FrequencyGrid::nodes() const {
  std::vector<double> out;
  for_each_node(*this, [&](double w, double) { out.push_back(w); });
  std::sort(out.begin(), out.end());
  return out;
}

FrequencyGrid FrequencyGrid::uniform(double omega, std::size_t panels, bool tails) {
  if (!(omega > 0.0) || panels == 0) throw DomainError("uniform grid needs omega > 0 and panels > 0");
  FrequencyGrid g;
  g.tail_panels = tails ? 2 : 0;
  for (std::size_t i = 0; i <= panels; ++i) {
    g.breakpoints.push_back(-omega + 2.0 * omega * static_cast<double>(i) / static_cast<double>(panels));
  }
  g.breakpoints.back() = omega;
  return g;
}

FrequencyGrid FrequencyGrid::with_points(double omega, std::vector<double> points, double max_width,
                                         bool tails) {
  if (!(omega > 0.0) || !(max_width > 0.0)) throw DomainError("grid needs omega > 0 and max_width > 0");
  std::erase_if(points, [omega](double x) { return !(x > -omega && x < omega); });
  points.push_back(-omega);
  points.push_back(omega);
  std::sort(points.begin(), points.end());
  const double merge = 1e-9 * omega;
  std::vector<double> unique;
  for (double x : points) {
    if (unique.empty() || x - unique.back() > merge) unique.push_back(x);
  }
  unique.back() = omega;

  FrequencyGrid g;
  g.tail_panels = tails ? 2 : 0;
  for (std::size_t i = 0; i + 1 < unique.size(); ++i) {
    const double a = unique[i];
    const double b = unique[i + 1];
    const auto pieces = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((b - a) / max_width)));
    for (std::size_t k = 0; k < pieces; ++k) {
      g.breakpoints.push_back(a + (b - a) * static_cast<double>(k) / static_cast<double>(pieces));
    }
  }
  g.breakpoints.push_back(omega);
  return g;
}

std::vector<double> apply_rule(const VectorIntegrand& f, std::size_t components,
                               const FrequencyGrid& grid) {
  std::vector<double> sum(components, 0.0);
  std::vector<double> buf(components, 0.0);
  for_each_node(grid, [&](double w, double weight) {
    std::fill(buf.begin(), buf.end(), 0.0);
    f(w, buf);
    for (std::size_t c = 0; c < components; ++c) sum[c] += weight * buf[c];
  });
  return sum;
}

QuadratureResult integrate(const VectorIntegrand& f, std::size_t components,
                           const FrequencyGrid& grid, const QuadratureOptions& options) {
  if (grid.breakpoints.size() < 2) throw DomainError("frequency grid needs at least one panel");
  FrequencyGrid current = grid;
  std::vector<double> coarse = apply_rule(f, components, current);
  QuadratureResult result;
  result.errors.assign(components, 0.0);
  for (int level = 1; level <= options.max_doublings; ++level) {
    current = current.refined();
    std::vector<double> fine = apply_rule(f, components, current);
    double worst = 0.0;
    for (std::size_t c = 0; c < components; ++c) {
      result.errors[c] = std::abs(fine[c] - coarse[c]);
      if (!std::isfinite(result.errors[c])) throw AccuracyError("non-finite integrand encountered during quadrature");
      worst = std::max(worst, result.errors[c]);
    }
    coarse = std::move(fine);
    if (worst <= options.abs_tol) {
      result.values = std::move(coarse);
      result.doublings = level;
      return result;
    }
  }
  std::ostringstream os;
  os << "quadrature did not reach abs_tol=" << options.abs_tol << " after "
     << options.max_doublings << " doublings (last change " << *std::max_element(result.errors.begin(), result.errors.end())
     << ")";
  throw AccuracyError(os.str());
}

ScalarQuadrature integrate(const std::function<double(double)>& f, const FrequencyGrid& grid,
                           const QuadratureOptions& options) {
  const auto r = integrate([&f](double w, std::span<double> out) { out[0] = f(w); }, 1, grid, options);
  return {r.values[0], r.errors[0]};
}

}  // namespace nrbridge
