#pragma once

// File formats and JSON round-tripping of the value types.
//
// Trajectory CSV:   t_seconds,delta_phi_rad,delta_phi_dot_rad_per_s
// Spectrum JSON:    {base_energy_J, omega_rad_per_s, coefficients: [{n, re, im}]}
// Transition JSON:  the spectrum layout plus carrier_frequency_Hz,
//                   delta_alpha and the sideband line list.
// Reals are written with 17 significant digits.

#include <json.hpp>
#include <ostream>
#include <string>

#include "scalar_ab/ab_phase.hpp"
#include "scalar_ab/circuit_dynamics.hpp"
#include "scalar_ab/grav_redshift.hpp"
#include "scalar_ab/model.hpp"
#include "scalar_ab/spectral.hpp"

namespace scalar_ab {

void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
void write_phase_history_csv(std::ostream& os, const PhaseHistory& history);

nlohmann::json spectrum_to_json(const SidebandSpectrum& spectrum);
nlohmann::json floquet_to_json(const FloquetDecomposition& d);
nlohmann::json transition_to_json(const TransitionSpectrum& spectrum);
nlohmann::json landscape_to_json(const PotentialLandscape& landscape);

// Round-trip serialisation. Deserialisation re-runs the constructors, so
// invariants are checked again.
nlohmann::json to_json_value(const PhysicalConstants& c);
nlohmann::json to_json_value(const CircuitParams& p);
nlohmann::json to_json_value(const DriveWaveform& w);
nlohmann::json to_json_value(const Trajectory& t);
nlohmann::json to_json_value(const SidebandSpectrum& s);
nlohmann::json to_json_value(const MassShell& s);
nlohmann::json to_json_value(const TwoLevelAtom& a);

PhysicalConstants constants_from_json(const nlohmann::json& j);
CircuitParams circuit_from_json(const nlohmann::json& j);
DriveWaveform waveform_from_json(const nlohmann::json& j);
Trajectory trajectory_from_json(const nlohmann::json& j);
SidebandSpectrum spectrum_from_json(const nlohmann::json& j);
MassShell shell_from_json(const nlohmann::json& j);
TwoLevelAtom atom_from_json(const nlohmann::json& j);

// "%.17g"
std::string format_real(double x);

}  // namespace scalar_ab
