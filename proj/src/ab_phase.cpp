#include "scalar_ab/ab_phase.hpp"

#include <algorithm>
#include <cmath>

#include "scalar_ab/errors.hpp"

namespace scalar_ab {

using detail::require;

PhaseHistory::PhaseHistory(std::vector<double> times, std::vector<double> phase,
                           double error_estimate)
    : times_(std::move(times)), phase_(std::move(phase)), error_estimate_(error_estimate) {
  require(times_.size() == phase_.size(), "PhaseHistory: times and phase must have equal length");
  require(!times_.empty(), "PhaseHistory: at least one time point required");
  require(phase_.front() == 0.0, "PhaseHistory: phase[0] must be 0");
  for (std::size_t k = 1; k < times_.size(); ++k)
    require(times_[k] > times_[k - 1], "PhaseHistory: times must be strictly increasing");
}

SampledSeries::SampledSeries(std::vector<Sample> samples) : samples_(std::move(samples)) {
  require(!samples_.empty(), "SampledSeries: at least one sample required");
  for (std::size_t k = 0; k < samples_.size(); ++k) {
    require(std::isfinite(samples_[k].t) && std::isfinite(samples_[k].value),
            "SampledSeries: samples must be finite");
    if (k > 0)
      require(samples_[k].t > samples_[k - 1].t,
              "SampledSeries: timestamps must be strictly increasing");
  }
}

double SampledSeries::operator()(double t) const {
  require(t >= front_time() && t <= back_time(), "SampledSeries: time outside the sampled span");
  auto it = std::upper_bound(samples_.begin(), samples_.end(), t,
                             [](double x, const Sample& s) { return x < s.t; });
  if (it == samples_.end()) return samples_.back().value;
  const Sample& hi = *it;
  const Sample& lo = *(it - 1);
  return lo.value + (t - lo.t) / (hi.t - lo.t) * (hi.value - lo.value);
}

namespace {

void check_grid(std::span<const double> t_grid) {
  require(!t_grid.empty(), "time grid must not be empty");
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    require(std::isfinite(t_grid[k]), "time grid must be finite");
    if (k > 0) require(t_grid[k] > t_grid[k - 1], "time grid must be strictly increasing");
  }
}

struct PanelResult {
  double value;
  double error;
};

// Trapezoid on [a, b], halving the panel width until the Richardson
// estimate (T_h - T_2h)/3 meets the tolerance; returns the extrapolated value.
PanelResult integrate_panel(const TimeFunction& f, double a, double b,
                            const QuadratureOptions& opts) {
  const double fa = f(a), fb = f(b);
  double h = b - a;
  double sum_ends = 0.5 * (fa + fb);
  double sum_inner = 0.0;
  double abs_sum = 0.5 * (std::abs(fa) + std::abs(fb));
  double t_prev = h * sum_ends;

  // One midpoint level always: it yields the error estimate.
  int panels = 1;
  for (int level = 1; level <= opts.max_level; ++level) {
    double mid = 0.0, abs_mid = 0.0;
    for (int k = 0; k < panels; ++k) {
      const double v = f(a + (k + 0.5) * h);
      mid += v;
      abs_mid += std::abs(v);
    }
    sum_inner += mid;
    abs_sum += abs_mid;
    panels *= 2;
    h *= 0.5;
    const double t_cur = h * (sum_ends + sum_inner);
    const double err = (t_cur - t_prev) / 3.0;
    const double scale = h * abs_sum;
    if (!opts.adaptive) return {t_prev, std::abs(err)};
    if (!std::isfinite(t_cur)) throw NumericError("quadrature: integrand is not finite");
    if (level >= 3 && std::abs(err) <= opts.rel_tol * scale + opts.abs_tol)
      return {t_cur + err, std::abs(err)};
    t_prev = t_cur;
  }
  throw NumericError("quadrature: Richardson refinement did not reach the tolerance on [" +
                     detail::num(a) + ", " + detail::num(b) + "]");
}

}  // namespace

PhaseHistory accumulate_phase(const TimeFunction& f, double scale, std::span<const double> t_grid,
                              std::span<const double> breakpoints, const QuadratureOptions& opts) {
  check_grid(t_grid);
  require(opts.rel_tol >= 0.0 && opts.abs_tol >= 0.0 && opts.rel_tol + opts.abs_tol > 0.0,
          "quadrature: tolerances must be non-negative and not both zero");
  std::vector<double> cuts(breakpoints.begin(), breakpoints.end());
  std::sort(cuts.begin(), cuts.end());

  std::vector<double> phase(t_grid.size(), 0.0);
  double acc = 0.0, err_total = 0.0;
  auto cut = cuts.begin();
  for (std::size_t k = 1; k < t_grid.size(); ++k) {
    const double a = t_grid[k - 1], b = t_grid[k];
    while (cut != cuts.end() && *cut <= a) ++cut;
    double left = a;
    double interval = 0.0;
    for (; cut != cuts.end() && *cut < b; ++cut) {
      const auto r = integrate_panel(f, left, *cut, opts);
      interval += r.value;
      err_total += r.error;
      left = *cut;
    }
    const auto r = integrate_panel(f, left, b, opts);
    interval += r.value;
    err_total += r.error;
    acc += interval;
    phase[k] = scale * acc;
  }
  return PhaseHistory({t_grid.begin(), t_grid.end()}, std::move(phase),
                      std::abs(scale) * err_total);
}

PhaseHistory accumulate_electric_phase(double charge, const DriveWaveform& voltage,
                                       std::span<const double> t_grid,
                                       const QuadratureOptions& opts) {
  check_grid(t_grid);
  require(voltage.covers(t_grid.front(), t_grid.back()),
          "accumulate_electric_phase: sampled waveform does not cover the time grid");
  if (charge == 0.0) return PhaseHistory({t_grid.begin(), t_grid.end()},
                                         std::vector<double>(t_grid.size(), 0.0));
  const auto cuts = voltage.breakpoints(t_grid.front(), t_grid.back());
  return accumulate_phase([&](double t) { return voltage.value(t); }, charge / kSI.hbar, t_grid,
                          cuts, opts);
}

PhaseHistory accumulate_grav_phase(const std::vector<Sample>& mass_history,
                                   const std::vector<Sample>& potential_history,
                                   std::span<const double> t_grid, const QuadratureOptions& opts) {
  check_grid(t_grid);
  SampledSeries mass(mass_history), potential(potential_history);
  for (const auto& s : mass_history)
    require(s.value >= 0.0, "accumulate_grav_phase: masses must be >= 0");
  require(mass.covers(t_grid.front(), t_grid.back()),
          "accumulate_grav_phase: mass history does not cover the time grid");
  require(potential.covers(t_grid.front(), t_grid.back()),
          "accumulate_grav_phase: potential history does not cover the time grid");
  std::vector<double> cuts;
  for (const auto& s : mass_history) cuts.push_back(s.t);
  for (const auto& s : potential_history) cuts.push_back(s.t);
  return accumulate_phase([&](double t) { return mass(t) * potential(t); }, 1.0 / kSI.hbar, t_grid,
                          cuts, opts);
}

PhaseHistory accumulate_grav_phase(const TimeFunction& mass, const TimeFunction& potential,
                                   std::span<const double> t_grid, const QuadratureOptions& opts) {
  return accumulate_phase([&](double t) { return mass(t) * potential(t); }, 1.0 / kSI.hbar, t_grid,
                          {}, opts);
}

double species_charge(Species s) {
  switch (s) {
    case Species::CooperPair: return 2.0 * kSI.e_charge;
    case Species::Electron: return kSI.e_charge;
    case Species::Ion: return -kSI.e_charge;
  }
  return 0.0;
}

SpeciesCount::SpeciesCount(Species species, std::vector<Sample> counts)
    : species_(species), charge_per_unit_(species_charge(species)), counts_(std::move(counts)) {
  for (const auto& s : counts_.samples())
    require(s.value >= 0.0, "SpeciesCount: counts must be non-negative");
}

PhaseHistory net_bulk_phase(std::span<const SpeciesCount> species, const DriveWaveform& voltage,
                            std::span<const double> t_grid, const QuadratureOptions& opts) {
  check_grid(t_grid);
  require(!species.empty(), "net_bulk_phase: at least one species required");
  require(voltage.covers(t_grid.front(), t_grid.back()),
          "net_bulk_phase: sampled waveform does not cover the time grid");
  std::vector<double> cuts = voltage.breakpoints(t_grid.front(), t_grid.back());
  for (const auto& s : species) {
    require(s.counts().covers(t_grid.front(), t_grid.back()),
            "net_bulk_phase: species count history does not cover the time grid");
    for (const auto& p : s.counts().samples()) cuts.push_back(p.t);
  }
  // The net integrand is the charge density sum_s q_s N_s(t) times V(t); it is
  // integrated once so that a neutral bulk cancels before quadrature.
  auto integrand = [&](double t) {
    double q = 0.0;
    for (const auto& s : species) q += s.charge_per_unit() * s.counts()(t);
    return q * voltage.value(t);
  };
  return accumulate_phase(integrand, 1.0 / kSI.hbar, t_grid, cuts, opts);
}

std::vector<double> uniform_grid(double t0, double t1, std::size_t n_steps) {
  require(n_steps >= 1 && t1 > t0, "uniform_grid: need t1 > t0 and at least one step");
  std::vector<double> g(n_steps + 1);
  const double dt = (t1 - t0) / static_cast<double>(n_steps);
  for (std::size_t k = 0; k <= n_steps; ++k) g[k] = t0 + static_cast<double>(k) * dt;
  g.back() = t1;
  return g;
}

}  // namespace scalar_ab
