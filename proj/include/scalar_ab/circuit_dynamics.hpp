#pragma once

// Classical dynamics of the junction phase difference in the caged circuit:
//
//   phi'' + omega_c^2 phi + K sin(phi) + kappa * envelope(t) * dV/dt = 0
//
// with omega_c = 1/sqrt(L C'), K = (2e/hbar)^2 E_J / C_sigma and
// kappa = (2e/hbar) C_g / C_sigma. For V(t) = V0 sin(omega t) the drive term
// is drive_coeff * cos(omega t) with drive_coeff = kappa * omega * V0.

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "scalar_ab/model.hpp"

namespace scalar_ab {

struct EomParams {
  double omega_c = 0.0;          // rad/s
  double nonlinear_coeff = 0.0;  // 1/s^2
  double drive_coeff = 0.0;      // 1/s^2, amplitude of the forcing term
  double coupling = 0.0;         // 1/(V s), kappa
  DriveWaveform drive = DriveWaveform::sinusoid(0.0, 1.0);

  // Small-oscillation frequency about phi = 0.
  double linear_frequency() const;
  // Forcing term kappa * dV/dt (without envelope).
  double forcing(double t) const;
  // Conserved energy of the undriven motion (per unit "mass", 1/s^2).
  double energy(double phi, double phi_dot) const;
};

EomParams build_eom(const CircuitParams& params, const DriveWaveform& drive);

enum class EnvelopeShape { RaisedCosine, Instantaneous };

// Multiplies the drive term: 0 before `on`, ramps to 1 over `ramp` seconds,
// ramps back down so that it reaches 0 exactly at `off`.
struct DriveEnvelope {
  double on = -std::numeric_limits<double>::infinity();
  double off = std::numeric_limits<double>::infinity();
  double ramp = 0.0;
  EnvelopeShape shape = EnvelopeShape::RaisedCosine;

  static DriveEnvelope always_on() { return {}; }
  // Default ramp is five drive periods.
  static DriveEnvelope window(double on, double off, double drive_period,
                              EnvelopeShape shape = EnvelopeShape::RaisedCosine,
                              double ramp_periods = 5.0);

  double operator()(double t) const;
  // Instants where the envelope is not smooth.
  std::vector<double> breakpoints() const;
};

enum class StepMethod { DormandPrince45, RungeKutta4 };

struct IntegratorOptions {
  StepMethod method = StepMethod::DormandPrince45;
  double rel_tol = 1e-12;
  double abs_tol = 1e-14;
  double fixed_step = 0.0;    // RungeKutta4 only
  double initial_step = 0.0;  // 0 selects automatically
  long max_steps = 200'000'000;
  // Number of uniformly spaced output samples including both ends;
  // 0 records every accepted step.
  std::size_t output_samples = 0;
};

Trajectory integrate_trajectory(const EomParams& eom, double phi0, double phi_dot0, double t0,
                                double t1, const DriveEnvelope& envelope = DriveEnvelope::always_on(),
                                const IntegratorOptions& options = {});

struct LandscapePoint {
  double phi = 0.0;
  double u = 0.0;
};

struct PotentialLandscape {
  std::vector<double> phi_grid;
  std::vector<double> u_values;
  std::vector<LandscapePoint> minima;
  // Maxima between adjacent minima.
  std::vector<LandscapePoint> barrier_tops;
  // Height of each barrier above the higher of its two neighbouring minima.
  std::vector<double> barrier_heights;
};

// U(phi) = (hbar/2e)^2 phi^2 / (2L) - E_J cos(phi)
double potential_energy(const CircuitParams& params, double phi);
double potential_curvature(const CircuitParams& params, double phi);

PotentialLandscape potential_landscape(const CircuitParams& params, double phi_lo, double phi_hi,
                                       std::size_t n_points);

// Number of flux quanta represented by a phase difference: round(phi / 2 pi).
long flux_quantum_count(double delta_phi);

// Harmonic estimate hbar * sqrt(U''(phi*) / m_eff), m_eff = (hbar/2e)^2 C_sigma.
double harmonic_level_spacing(const PotentialLandscape& landscape, const CircuitParams& params,
                              std::size_t which_minimum);

}  // namespace scalar_ab
