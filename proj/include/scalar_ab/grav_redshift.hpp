#pragma once

// A two-level atom inside a spherical mass shell M(t) = M0 + M1 cos(omega t).
// The interior potential Phi(t) = -G M(t) / r0 is uniform, so the atom feels
// no force, yet each level picks up the phase (m / hbar) * integral Phi dt.
// The levels differ in rest mass by dE / c^2, so the transition line carries
// FM sidebands of depth delta_alpha = G M1 (m_f - m_i) / (hbar omega r0) on
// top of the static redshift from M0.

#include <vector>

#include "scalar_ab/ab_phase.hpp"
#include "scalar_ab/model.hpp"

namespace scalar_ab {

struct SidebandLine {
  int n = 0;
  double frequency = 0.0;           // Hz
  double relative_amplitude = 0.0;  // |J_n(delta_alpha)|
};

struct TransitionSpectrum {
  double carrier_frequency = 0.0;  // Hz, redshifted by the DC potential
  double local_frequency = 0.0;    // Hz, (E_f - E_i) / h
  double omega = 0.0;              // rad/s, shell modulation
  double delta_alpha = 0.0;
  int truncation_n = 0;
  std::vector<SidebandLine> sideband_lines;  // sorted by n; exact zeros omitted
};

struct ModulationIndices {
  double alpha_i = 0.0;
  double alpha_f = 0.0;
  double delta_alpha = 0.0;
};

// -G (M0 + M1 cos(omega t)) / r0, the same at every interior point.
double shell_potential(const MassShell& shell, double t);

// m = E / (c^2 (1 - Phi / c^2)); requires |Phi| < c^2.
double rest_mass_in_potential(double rest_energy, double potential);

// Frequency seen far away from a source emitting f_local in potential Phi:
// f_local / (1 - Phi / c^2).
double redshifted_frequency(double local_frequency, double potential);

ModulationIndices modulation_indices(const TwoLevelAtom& atom, const MassShell& shell);

// truncation_n <= 0 selects the default truncation for delta_alpha.
TransitionSpectrum transition_sideband_spectrum(const TwoLevelAtom& atom, const MassShell& shell,
                                                int truncation_n = 0);

// Transition rate |<f| e^{+i phi} H' e^{-i phi} |i>|^2 with a common electric
// phase on bra and ket, evaluated at every sample of the history; returns the
// sample whose rate deviates most from base_rate.
double ion_cancellation_check(const PhaseHistory& common_phase, double base_rate);

// Interior potential of a shell of fixed mass whose radius follows r0(t)
// (an expanding shell), sampled at the radius samples' instants.
std::vector<Sample> exploding_shell_potential(double mass, const std::vector<Sample>& radius_history);

}  // namespace scalar_ab
