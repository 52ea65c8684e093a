#pragma once

// Scalar Aharonov-Bohm phases phi(t) = (1/hbar) * integral of a potential
// energy history, accumulated by trapezoid quadrature with Richardson
// refinement on every interval of a caller-supplied time grid.

#include <functional>
#include <span>
#include <vector>

#include "scalar_ab/model.hpp"

namespace scalar_ab {

class PhaseHistory {
 public:
  PhaseHistory(std::vector<double> times, std::vector<double> phase,
               double error_estimate = 0.0);

  const std::vector<double>& times() const { return times_; }
  const std::vector<double>& phase() const { return phase_; }
  // Richardson estimate of the accumulated quadrature error (rad).
  double error_estimate() const { return error_estimate_; }
  std::size_t size() const { return times_.size(); }

 private:
  std::vector<double> times_;
  std::vector<double> phase_;
  double error_estimate_;
};

struct QuadratureOptions {
  // Per-interval stopping rule: |error| <= rel_tol * integral(|f|) + abs_tol.
  double rel_tol = 1e-9;
  double abs_tol = 0.0;
  // When false, each grid interval (split at breakpoints) gets a single
  // trapezoid panel: the plain composite rule on the supplied grid.
  bool adaptive = true;
  int max_level = 24;
};

// A sampled scalar history, linearly interpolated. Unlike DriveWaveform it
// is not periodic: evaluation outside its span is a coverage error.
class SampledSeries {
 public:
  explicit SampledSeries(std::vector<Sample> samples);

  double operator()(double t) const;
  double front_time() const { return samples_.front().t; }
  double back_time() const { return samples_.back().t; }
  bool covers(double a, double b) const { return a >= front_time() && b <= back_time(); }
  const std::vector<Sample>& samples() const { return samples_; }

 private:
  std::vector<Sample> samples_;
};

using TimeFunction = std::function<double(double)>;

// phase[k] = scale * integral_{t_grid[0]}^{t_grid[k]} f dt. `breakpoints`
// lists instants where f is not smooth; panels never straddle them.
PhaseHistory accumulate_phase(const TimeFunction& f, double scale, std::span<const double> t_grid,
                              std::span<const double> breakpoints = {},
                              const QuadratureOptions& opts = {});

// phi = (charge / hbar) * integral V dt.
PhaseHistory accumulate_electric_phase(double charge, const DriveWaveform& voltage,
                                       std::span<const double> t_grid,
                                       const QuadratureOptions& opts = {});

// phi = (1/hbar) * integral m(t) Phi(t) dt from sampled histories.
PhaseHistory accumulate_grav_phase(const std::vector<Sample>& mass_history,
                                   const std::vector<Sample>& potential_history,
                                   std::span<const double> t_grid,
                                   const QuadratureOptions& opts = {});

// Same with analytic histories (e.g. a shell potential).
PhaseHistory accumulate_grav_phase(const TimeFunction& mass, const TimeFunction& potential,
                                   std::span<const double> t_grid,
                                   const QuadratureOptions& opts = {});

enum class Species { CooperPair, Electron, Ion };

// Charge attributed to one unit of a species in the bulk phase sum:
// +2e per Cooper pair, +e per electron, -e per ion.
double species_charge(Species s);

class SpeciesCount {
 public:
  SpeciesCount(Species species, std::vector<Sample> counts);

  Species species() const { return species_; }
  double charge_per_unit() const { return charge_per_unit_; }
  const SampledSeries& counts() const { return counts_; }

 private:
  Species species_;
  double charge_per_unit_;
  SampledSeries counts_;
};

// Signed sum over species of (q_s / hbar) * integral N_s(t) V(t) dt.
PhaseHistory net_bulk_phase(std::span<const SpeciesCount> species, const DriveWaveform& voltage,
                            std::span<const double> t_grid, const QuadratureOptions& opts = {});

// Uniform grid of n_steps + 1 points on [t0, t1].
std::vector<double> uniform_grid(double t0, double t1, std::size_t n_steps);

}  // namespace scalar_ab
