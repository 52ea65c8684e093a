#include "scalar_ab/presets.hpp"

#include <numbers>

namespace scalar_ab::presets {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kFemto = 1e-15;
}  // namespace

double ghz_to_joule(double ghz) { return ghz * kGHz * kSI.h; }

CircuitElements fig3_elements() {
  const double e_l = ghz_to_joule(1.0);
  const double e_j = ghz_to_joule(25.0);
  const double omega0 = kTwoPi * 8.5 * kGHz;
  const double k = 2.0 * kSI.e_charge / kSI.hbar;
  const double phi0r = kSI.reduced_flux_quantum();

  CircuitElements el;
  el.c_sigma = k * k * (e_l + e_j) / (omega0 * omega0);
  el.c_prime = el.c_sigma;
  el.inductance = phi0r * phi0r / e_l;
  el.e_josephson = e_j;
  el.c_gate = 5.0 * kFemto;
  el.c_josephson = 20.0 * kFemto;
  el.c_sphere = 1000.0 * kFemto;
  return el;
}

CircuitParams fig3_circuit() { return CircuitParams(fig3_elements()); }

DriveWaveform fig3_drive() {
  return DriveWaveform::sinusoid(1e-6, kTwoPi * 150.0 * kMHz, -0.5 * std::numbers::pi);
}

CircuitScenario fig3_scenario() {
  const DriveWaveform drive = fig3_drive();
  const double period = drive.period();
  DriveEnvelope env;
  env.on = 0.0;
  env.off = 2.75 * period;
  env.ramp = 0.0;
  env.shape = EnvelopeShape::Instantaneous;
  return {fig3_circuit(), drive, env, 5.0 * period, 4001};
}

CircuitParams fig4_circuit() { return fig3_circuit(); }

MassShell earth_shell() { return MassShell(5.972e24, 1e19, 6.371e6, kTwoPi * 1.0); }

TwoLevelAtom earth_atom() {
  const double hydrogen_mass = 1.6735575e-27;
  return TwoLevelAtom::from_ground_mass(hydrogen_mass, 0.0, kSI.h * 1e15);
}

MassShell supernova_shell() {
  const double solar_mass = 1.98847e30;
  return MassShell(10.0 * solar_mass, 2e24, 1e9, kTwoPi * 100.0);
}

}  // namespace scalar_ab::presets
