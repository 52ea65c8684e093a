#include "scalar_ab/io.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "scalar_ab/errors.hpp"

namespace scalar_ab {

using nlohmann::json;

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "t_seconds,delta_phi_rad,delta_phi_dot_rad_per_s\n";
  for (std::size_t i = 0; i < traj.size(); ++i) {
    os << format_real(traj.times()[i]) << ',' << format_real(traj.delta_phi()[i]) << ','
       << format_real(traj.delta_phi_dot()[i]) << '\n';
  }
}

void write_phase_history_csv(std::ostream& os, const PhaseHistory& history) {
  os << "t_seconds,phase_rad\n";
  for (std::size_t i = 0; i < history.size(); ++i)
    os << format_real(history.times()[i]) << ',' << format_real(history.phase()[i]) << '\n';
}

namespace {

json coefficient_list(const std::map<int, std::complex<double>>& coeffs) {
  json arr = json::array();
  for (const auto& [n, c] : coeffs) arr.push_back({{"n", n}, {"re", c.real() + 0.0}, {"im", c.imag() + 0.0}});  // no -0
  return arr;
}

std::map<int, std::complex<double>> coefficient_map(const json& arr) {
  std::map<int, std::complex<double>> out;
  for (const auto& e : arr) {
    const int n = e.at("n").get<int>();
    detail::require(!out.contains(n), "duplicate coefficient index " + std::to_string(n));
    out[n] = {e.at("re").get<double>(), e.at("im").get<double>()};
  }
  return out;
}

// JSON has no infinity; an infinite value is written as null.
json real_or_null(double x) { return std::isinf(x) ? json(nullptr) : json(x); }

double real_from(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

json samples_json(const std::vector<Sample>& s) {
  json arr = json::array();
  for (const auto& p : s) arr.push_back({p.t, p.value});
  return arr;
}

std::vector<Sample> samples_from(const json& arr) {
  std::vector<Sample> s;
  for (const auto& p : arr) s.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  return s;
}

template <class F>
auto parse_guard(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    detail::fail_invariant(std::string(what) + ": " + e.what());
  }
}

}  // namespace

json spectrum_to_json(const SidebandSpectrum& s) {
  return {{"base_energy_J", s.base_energy()},
          {"omega_rad_per_s", s.omega()},
          {"truncation_n", s.truncation_n()},
          {"coefficients", coefficient_list(s.coefficients())}};
}

json floquet_to_json(const FloquetDecomposition& d) {
  return {{"base_energy_J", d.quasi_energy},
          {"omega_rad_per_s", d.omega},
          {"mean_potential_J", d.mean_potential},
          {"truncation_n", d.truncation_n},
          {"residual", d.residual},
          {"samples_per_period", d.samples_per_period},
          {"coefficients", coefficient_list(d.coefficients)}};
}

json transition_to_json(const TransitionSpectrum& s) {
  json coeffs = json::array();
  json lines = json::array();
  for (const auto& l : s.sideband_lines) {
    coeffs.push_back({{"n", l.n}, {"re", l.relative_amplitude}, {"im", 0.0}});
    lines.push_back(
        {{"n", l.n}, {"frequency_Hz", l.frequency}, {"relative_amplitude", l.relative_amplitude}});
  }
  return {{"base_energy_J", kSI.h * s.carrier_frequency},
          {"omega_rad_per_s", s.omega},
          {"carrier_frequency_Hz", s.carrier_frequency},
          {"local_frequency_Hz", s.local_frequency},
          {"fractional_shift", (s.local_frequency - s.carrier_frequency) / s.local_frequency},
          {"delta_alpha", s.delta_alpha},
          {"truncation_n", s.truncation_n},
          {"coefficients", coeffs},
          {"lines", lines}};
}

json landscape_to_json(const PotentialLandscape& l) {
  auto points = [](const std::vector<LandscapePoint>& v) {
    json arr = json::array();
    for (const auto& p : v) arr.push_back({{"phi_rad", p.phi}, {"energy_J", p.u}});
    return arr;
  };
  return {{"phi_rad", l.phi_grid},
          {"energy_J", l.u_values},
          {"minima", points(l.minima)},
          {"barrier_tops", points(l.barrier_tops)},
          {"barrier_heights_J", l.barrier_heights}};
}

json to_json_value(const PhysicalConstants& c) {
  return {{"h", c.h},           {"hbar", c.hbar},         {"e_charge", c.e_charge},
          {"c_light", c.c_light}, {"G_newton", c.G_newton}, {"flux_quantum", c.flux_quantum}};
}

PhysicalConstants constants_from_json(const json& j) {
  return parse_guard("constants", [&] {
    PhysicalConstants c{j.at("h").get<double>(),       j.at("hbar").get<double>(),
                        j.at("e_charge").get<double>(), j.at("c_light").get<double>(),
                        j.at("G_newton").get<double>(), j.at("flux_quantum").get<double>()};
    c.validate();
    return c;
  });
}

json to_json_value(const CircuitParams& p) {
  const auto& e = p.elements();
  return {{"c_sphere_F", e.c_sphere},   {"c_sigma_F", e.c_sigma},
          {"c_gate_F", e.c_gate},       {"c_prime_F", e.c_prime},
          {"inductance_H", real_or_null(e.inductance)},
          {"e_josephson_J", e.e_josephson}, {"c_josephson_F", e.c_josephson}};
}

CircuitParams circuit_from_json(const json& j) {
  return parse_guard("circuit", [&] {
    CircuitElements e;
    e.c_sphere = j.at("c_sphere_F").get<double>();
    e.c_sigma = j.at("c_sigma_F").get<double>();
    e.c_gate = j.at("c_gate_F").get<double>();
    e.c_prime = j.at("c_prime_F").get<double>();
    e.inductance = real_from(j.at("inductance_H"));
    e.e_josephson = j.at("e_josephson_J").get<double>();
    e.c_josephson = j.at("c_josephson_F").get<double>();
    return CircuitParams(e);
  });
}

json to_json_value(const DriveWaveform& w) {
  if (w.kind() == WaveformKind::Sinusoid) {
    return {{"kind", "sinusoid"},
            {"amplitude", w.amplitude()},
            {"omega_rad_per_s", w.omega()},
            {"phase0_rad", w.phase0()},
            {"offset", w.offset()}};
  }
  json j = {{"kind", "sampled"},
            {"samples", samples_json(w.samples())},
            {"periodic_extension", w.periodic_extension()}};
  if (w.derivative_samples()) j["derivative"] = samples_json(*w.derivative_samples());
  return j;
}

DriveWaveform waveform_from_json(const json& j) {
  return parse_guard("waveform", [&] {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "sinusoid") {
      return DriveWaveform::sinusoid(j.at("amplitude").get<double>(),
                                     j.at("omega_rad_per_s").get<double>(),
                                     j.value("phase0_rad", 0.0), j.value("offset", 0.0));
    }
    detail::require(kind == "sampled", "waveform: unknown kind '" + kind + "'");
    std::optional<std::vector<Sample>> d;
    if (j.contains("derivative")) d = samples_from(j.at("derivative"));
    return DriveWaveform::sampled(samples_from(j.at("samples")), std::move(d),
                                  j.value("periodic_extension", true));
  });
}

json to_json_value(const Trajectory& t) {
  const auto& m = t.meta();
  return {{"t_seconds", t.times()},
          {"delta_phi_rad", t.delta_phi()},
          {"delta_phi_dot_rad_per_s", t.delta_phi_dot()},
          {"meta",
           {{"omega_c", m.omega_c},
            {"nonlinear_coeff", m.nonlinear_coeff},
            {"drive_coeff", m.drive_coeff},
            {"drive_omega", m.drive_omega},
            {"drive_on", real_or_null(m.drive_on)},
            {"drive_off", real_or_null(m.drive_off)},
            {"ramp", m.ramp},
            {"method", m.method},
            {"rel_tol", m.rel_tol},
            {"abs_tol", m.abs_tol},
            {"accepted_steps", m.accepted_steps},
            {"rejected_steps", m.rejected_steps}}}};
}

Trajectory trajectory_from_json(const json& j) {
  return parse_guard("trajectory", [&] {
    TrajectoryMeta m;
    if (j.contains("meta")) {
      const auto& mj = j.at("meta");
      m.omega_c = mj.at("omega_c").get<double>();
      m.nonlinear_coeff = mj.at("nonlinear_coeff").get<double>();
      m.drive_coeff = mj.at("drive_coeff").get<double>();
      m.drive_omega = mj.at("drive_omega").get<double>();
      // on = -inf and off = +inf are both written as null.
      m.drive_on = mj.at("drive_on").is_null() ? -std::numeric_limits<double>::infinity()
                                                : mj.at("drive_on").get<double>();
      m.drive_off = real_from(mj.at("drive_off"));
      m.ramp = mj.at("ramp").get<double>();
      m.method = mj.at("method").get<std::string>();
      m.rel_tol = mj.at("rel_tol").get<double>();
      m.abs_tol = mj.at("abs_tol").get<double>();
      m.accepted_steps = mj.at("accepted_steps").get<long>();
      m.rejected_steps = mj.at("rejected_steps").get<long>();
    }
    return Trajectory(j.at("t_seconds").get<std::vector<double>>(),
                      j.at("delta_phi_rad").get<std::vector<double>>(),
                      j.at("delta_phi_dot_rad_per_s").get<std::vector<double>>(), m);
  });
}

json to_json_value(const SidebandSpectrum& s) { return spectrum_to_json(s); }

SidebandSpectrum spectrum_from_json(const json& j) {
  return parse_guard("spectrum", [&] {
    return SidebandSpectrum(j.at("base_energy_J").get<double>(),
                            j.at("omega_rad_per_s").get<double>(),
                            coefficient_map(j.at("coefficients")),
                            j.at("truncation_n").get<int>());
  });
}

json to_json_value(const MassShell& s) {
  return {{"m0_kg", s.m0()},
          {"m1_kg", s.m1()},
          {"radius_m", s.radius()},
          {"omega_rad_per_s", s.omega()}};
}

MassShell shell_from_json(const json& j) {
  return parse_guard("shell", [&] {
    return MassShell(j.at("m0_kg").get<double>(), j.at("m1_kg").get<double>(),
                     j.at("radius_m").get<double>(), j.at("omega_rad_per_s").get<double>());
  });
}

json to_json_value(const TwoLevelAtom& a) {
  return {{"energy_i_J", a.energy_i()},
          {"energy_f_J", a.energy_f()},
          {"rest_mass_i_kg", a.rest_mass_i()},
          {"rest_mass_f_kg", a.rest_mass_f()},
          {"charge_C", a.charge()},
          {"rest_mass_f_residual_kg", a.rest_mass_f_residual()}};
}

TwoLevelAtom atom_from_json(const json& j) {
  return parse_guard("atom", [&] {
    return TwoLevelAtom(j.at("energy_i_J").get<double>(), j.at("energy_f_J").get<double>(),
                        j.at("rest_mass_i_kg").get<double>(), j.at("rest_mass_f_kg").get<double>(),
                        j.value("charge_C", 0.0), j.value("rest_mass_f_residual_kg", 0.0));
  });
}

}  // namespace scalar_ab
