#include "scalar_ab/grav_redshift.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "scalar_ab/errors.hpp"
#include "scalar_ab/spectral.hpp"

namespace scalar_ab {

using detail::require;

namespace {

double c_squared() { return kSI.c_light * kSI.c_light; }

void check_weak_field(double potential, const char* who) {
  require(std::isfinite(potential) && std::abs(potential) < c_squared(),
          std::string(who) + ": requires |Phi| < c^2");
}

}  // namespace

double shell_potential(const MassShell& shell, double t) {
  return -kSI.G_newton * (shell.m0() + shell.m1() * std::cos(shell.omega() * t)) / shell.radius();
}

double rest_mass_in_potential(double rest_energy, double potential) {
  check_weak_field(potential, "rest_mass_in_potential");
  return rest_energy / (c_squared() * (1.0 - potential / c_squared()));
}

double redshifted_frequency(double local_frequency, double potential) {
  check_weak_field(potential, "redshifted_frequency");
  return local_frequency / (1.0 - potential / c_squared());
}

ModulationIndices modulation_indices(const TwoLevelAtom& atom, const MassShell& shell) {
  require(shell.omega() > 0.0, "modulation_indices: shell omega must be > 0");
  const double k = kSI.G_newton * shell.m1() / (kSI.hbar * shell.omega() * shell.radius());
  return {k * atom.rest_mass_i(), k * atom.rest_mass_f(),
          k * atom.rest_mass_gap()};
}

TransitionSpectrum transition_sideband_spectrum(const TwoLevelAtom& atom, const MassShell& shell,
                                                int truncation_n) {
  TransitionSpectrum s;
  s.local_frequency = atom.transition_energy() / kSI.h;
  s.carrier_frequency =
      redshifted_frequency(s.local_frequency, -kSI.G_newton * shell.m0() / shell.radius());
  s.omega = shell.omega();
  s.delta_alpha = shell.m1() == 0.0 ? 0.0 : modulation_indices(atom, shell).delta_alpha;
  s.truncation_n = truncation_n > 0 ? truncation_n : default_truncation(s.delta_alpha);

  const auto coeffs = jacobi_anger_coeffs(s.delta_alpha, s.truncation_n);
  const double spacing = s.omega / (2.0 * std::numbers::pi);
  for (const auto& [n, c] : coeffs.coefficients()) {
    const double a = std::abs(c);
    if (a == 0.0) continue;
    s.sideband_lines.push_back({n, s.carrier_frequency + n * spacing, a});
  }
  return s;
}

double ion_cancellation_check(const PhaseHistory& common_phase, double base_rate) {
  require(base_rate >= 0.0 && std::isfinite(base_rate),
          "ion_cancellation_check: base_rate must be finite and >= 0");
  double worst = base_rate;
  for (double phi : common_phase.phase()) {
    // Bra and ket carry the same charge, so their phase factors are the same
    // c-number and combine before any phasor is formed. Wrapping first keeps
    // large accumulated phases harmless.
    const double wrapped = std::remainder(phi, 2.0 * std::numbers::pi);
    const std::complex<double> factor = std::polar(1.0, wrapped - wrapped);
    const double rate = std::norm(factor) * base_rate;
    if (std::abs(rate - base_rate) > std::abs(worst - base_rate)) worst = rate;
  }
  return worst;
}

std::vector<Sample> exploding_shell_potential(double mass,
                                              const std::vector<Sample>& radius_history) {
  require(mass >= 0.0, "exploding_shell_potential: mass must be >= 0");
  std::vector<Sample> out;
  out.reserve(radius_history.size());
  for (const auto& r : radius_history) {
    require(r.value > 0.0, "exploding_shell_potential: radius must be > 0");
    out.push_back({r.t, -kSI.G_newton * mass / r.value});
  }
  return out;
}

}  // namespace scalar_ab
