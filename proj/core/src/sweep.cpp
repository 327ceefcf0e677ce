#include "nrbridge/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "nrbridge/errors.hpp"

namespace nrbridge {

std::vector<double> GammaGrid::values() const {
  std::vector<double> out(static_cast<std::size_t>(count));
  if (count == 1) {
    out[0] = min;
    return out;
  }
  const double lo = std::log(min);
  const double hi = std::log(max);
  for (int k = 0; k < count; ++k) {
    out[static_cast<std::size_t>(k)] = std::exp(lo + (hi - lo) * k / (count - 1));
  }
  out.front() = min;
  out.back() = max;
  return out;
}

void SweepConfig::validate() const {
  const auto finite = [](double x) { return std::isfinite(x); };
  const SweepModel& m = model;
  for (double x : {m.eps_g, m.detuning, m.t_left, m.t_right, m.t_e5, m.t_bath}) {
    if (!finite(x)) throw ConfigError("model parameters must be finite");
  }
  if (!(m.temperature >= 0.0) || !finite(m.temperature)) throw ConfigError("temperature must be >= 0");
  if (!(m.two_fermi_velocity > 0.0)) throw ConfigError("two_fermi_velocity must be > 0");
  if (m.t_bath == 0.0) throw ConfigError("t_bath must be nonzero");
  if (!(gamma.min > 0.0) || !(gamma.max >= gamma.min) || !finite(gamma.max)) {
    throw ConfigError("gamma range must satisfy 0 < gamma_min <= gamma_max");
  }
  if (gamma.count < 2) throw ConfigError("gamma_count must be >= 2");
  if (e_nh.empty() || delta_mu.empty()) throw ConfigError("e_nh and delta_mu lists must be nonempty");
  for (double e : e_nh) {
    if (!(e >= 1.0) || !finite(e)) throw ConfigError("every e_nh must be >= 1");
  }
  for (double d : delta_mu) {
    if (!finite(d)) throw ConfigError("delta_mu values must be finite");
  }
  if (!(solver.abs_tol > 0.0)) throw ConfigError("solver tolerance must be > 0");
  if (solver.max_doublings < 0) throw ConfigError("max_doublings must be >= 0");
}

EffectiveModel sweep_point_model(const SweepModel& m, double gamma, double e_nh, double delta_mu) {
  if (!(gamma >= 0.0)) throw DomainError("drive intensity must be >= 0");
  EffectiveParams p;
  p.eps_g = m.eps_g;
  p.detuning = m.detuning;
  p.t_eg = {std::sqrt(gamma), 0.0};
  p.t_e5 = {m.t_e5, 0.0};
  p.left = gibbs_lead(m.t_left * m.t_left / m.two_fermi_velocity, 0.5 * delta_mu, m.temperature);
  p.right = gibbs_lead(m.t_right * m.t_right / m.two_fermi_velocity, -0.5 * delta_mu, m.temperature);
  p.gamma_5 = m.t_bath * m.t_bath / m.two_fermi_velocity;
  p.e_nh = e_nh;
  return make_effective_model(p);
}

std::vector<SweepRecord> SweepResult::curve(double e_nh, double delta_mu) const {
  std::vector<SweepRecord> out;
  for (const auto& r : records) {
    if (r.e_nh == e_nh && r.delta_mu == delta_mu) out.push_back(r);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const SweepRecord& a, const SweepRecord& b) { return a.gamma < b.gamma; });
  return out;
}

SweepRecord evaluate_point(const SweepConfig& cfg, double gamma, double e_nh, double delta_mu) {
  std::ostringstream where;
  where << "sweep point gamma=" << format_double(gamma) << " e_nh=" << format_double(e_nh)
        << " delta_mu=" << format_double(delta_mu);
  SteadyState s;
  try {
    s = solve(sweep_point_model(cfg.model, gamma, e_nh, delta_mu), cfg.solver);
  } catch (const AccuracyError& err) {
    throw AccuracyError(where.str() + ": " + err.what());
  }
  SweepRecord r;
  r.gamma = gamma;
  r.e_nh = e_nh;
  r.delta_mu = delta_mu;
  r.loss_current = s.loss_current;
  r.current_left = s.current_left;
  r.current_right = s.current_right;
  r.n_g = s.occupations[0];
  r.n_e = s.occupations[1];
  r.n_5 = s.occupations[2];
  r.continuity_residual = s.continuity_residual();
  r.grid_error = s.grid_error;
  if (!(std::abs(r.continuity_residual) <= kContinuityTolerance * std::max(1.0, std::abs(r.loss_current)))) {
    std::ostringstream os;
    os << where.str() << ": continuity residual " << r.continuity_residual << " exceeds "
       << kContinuityTolerance;
    throw AccuracyError(os.str());
  }
  return r;
}

SweepResult run_sweep(const SweepConfig& cfg, unsigned threads) {
  cfg.validate();
  struct Point {
    double gamma, e_nh, delta_mu;
  };
  std::vector<Point> points;
  for (double g : cfg.gamma.values()) {
    for (double e : cfg.e_nh) {
      for (double d : cfg.delta_mu) points.push_back({g, e, d});
    }
  }
  SweepResult result;
  result.records.resize(points.size());

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, points.size()));

  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::size_t first_error_index = points.size();
  std::mutex error_mutex;
  const auto worker = [&] {
    for (std::size_t k = next++; k < points.size(); k = next++) {
      try {
        result.records[k] = evaluate_point(cfg, points[k].gamma, points[k].e_nh, points[k].delta_mu);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        // Report the lowest failing index so the error does not depend on scheduling.
        if (k < first_error_index) {
          first_error_index = k;
          first_error = std::current_exception();
        }
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (first_error) std::rethrow_exception(first_error);
  return result;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_csv(std::ostream& os, const SweepResult& result) {
  os << kCsvHeader << '\n';
  for (const auto& r : result.records) {
    os << format_double(r.gamma) << ',' << format_double(r.e_nh) << ',' << format_double(r.delta_mu) << ','
       << format_double(r.loss_current) << ',' << format_double(r.current_left) << ','
       << format_double(r.current_right) << ',' << format_double(r.n_g) << ',' << format_double(r.n_e)
       << ',' << format_double(r.n_5) << ',' << format_double(r.continuity_residual) << ','
       << format_double(r.grid_error) << '\n';
  }
}

ZenoPeak find_zeno_peak(std::span<const double> gammas, std::span<const double> values,
                        const std::function<double(double)>& evaluate, double log_tolerance) {
  if (gammas.size() != values.size()) throw DimensionError("gamma and value grids differ in length");
  if (gammas.size() < 8) throw NoPeakError("peak search needs at least 8 grid points");
  const auto best = static_cast<std::size_t>(
      std::distance(values.begin(), std::max_element(values.begin(), values.end())));
  if (best == 0 || best + 1 == gammas.size()) {
    std::ostringstream os;
    os << "loss current is maximal at the grid edge gamma=" << format_double(gammas[best]);
    throw NoPeakError(os.str());
  }
  double a = std::log(gammas[best - 1]);
  double b = std::log(gammas[best + 1]);
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = evaluate(std::exp(c));
  double fd = evaluate(std::exp(d));
  while (b - a > log_tolerance) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = evaluate(std::exp(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = evaluate(std::exp(d));
    }
  }
  ZenoPeak peak{std::exp(0.5 * (a + b)), 0.0};
  peak.loss_current = evaluate(peak.gamma);
  if (values[best] > peak.loss_current) peak = {gammas[best], values[best]};
  return peak;
}

ZenoPeak find_zeno_peak(const SweepResult& result, const SweepConfig& cfg, double e_nh, double delta_mu) {
  const auto curve = result.curve(e_nh, delta_mu);
  std::vector<double> g, v;
  for (const auto& r : curve) {
    g.push_back(r.gamma);
    v.push_back(r.loss_current);
  }
  return find_zeno_peak(g, v, [&](double gamma) {
    return evaluate_point(cfg, gamma, e_nh, delta_mu).loss_current;
  });
}

}  // namespace nrbridge
