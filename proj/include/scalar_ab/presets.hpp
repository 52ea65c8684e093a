#pragma once

// Parameter sets for the caged-circuit and mass-shell scenarios.
//
// The circuit figures quote only omega_0 ~ 8.5 GHz, E_L = 1 GHz h and
// E_J = 25 GHz h; frequencies quoted in GHz are read as omega / 2 pi. The
// remaining element values are chosen here: C_sigma solves
// omega_0^2 = (2e/hbar)^2 (E_L + E_J) / C_sigma, C' = C_sigma so that the
// equation of motion and the potential landscape share one linear
// frequency, and C_g, C_J, C_sphere are representative.
//
// The flux-to-phase factor is PhysicalConstants::flux_to_phase(); the
// circuit caption's "alpha ~ 2e-15 Wb" is numerically the flux quantum.

#include <numbers>

#include "scalar_ab/circuit_dynamics.hpp"
#include "scalar_ab/model.hpp"

namespace scalar_ab::presets {

inline constexpr double kGHz = 1e9;
inline constexpr double kMHz = 1e6;

// Energy of a frequency quoted in GHz (E = h f).
double ghz_to_joule(double ghz);

struct CircuitScenario {
  CircuitParams circuit;
  DriveWaveform drive;
  DriveEnvelope envelope;
  double t_end;
  std::size_t output_samples;
};

CircuitElements fig3_elements();
CircuitParams fig3_circuit();
// V(t) = 1 uV sin(2 pi 150 MHz t).
DriveWaveform fig3_drive();
// Drive switched on abruptly at t = 0 from the grounded state and off
// abruptly after 2.75 drive periods, where dV/dt = 0; the run lasts five
// drive periods. Switching off after a whole number of periods would be a
// poor choice here: 3 omega_0 / omega = 170 is an integer, so the free
// oscillations excited at the two switching instants cancel.
CircuitScenario fig3_scenario();

// E_L = 1 GHz h, E_J = 25 GHz h.
CircuitParams fig4_circuit();
inline constexpr double kFig4PhiRange = 4.0 * std::numbers::pi;

MassShell earth_shell();
// 10^15 Hz transition in a hydrogen-mass atom.
TwoLevelAtom earth_atom();

// Ten solar masses at 1e9 m with a small 100 Hz breathing mode, sized so
// that the earth atom sees delta_alpha of order ten.
MassShell supernova_shell();

}  // namespace scalar_ab::presets
