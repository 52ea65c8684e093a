#pragma once

#include <numbers>

namespace scalar_ab {

// SI constants (CODATA 2018; h, e and c are exact by definition).
struct PhysicalConstants {
  double h;
  double hbar;
  double e_charge;
  double c_light;
  double G_newton;
  double flux_quantum;

  static constexpr PhysicalConstants codata2018() {
    constexpr double h = 6.62607015e-34;
    constexpr double e = 1.602176634e-19;
    return PhysicalConstants{h,
                             h / (2.0 * std::numbers::pi),
                             e,
                             299792458.0,
                             6.67430e-11,
                             h / (2.0 * e)};
  }

  // Converts a flux difference to a superconducting phase difference
  // (the factor 2*pi/Phi_0 multiplying fluxes inside the Josephson cosine).
  constexpr double flux_to_phase() const {
    return 2.0 * std::numbers::pi / flux_quantum;
  }

  // Reduced flux quantum hbar/2e.
  constexpr double reduced_flux_quantum() const {
    return hbar / (2.0 * e_charge);
  }

  // Throws InvariantError when a constant is non-positive or the flux
  // quantum is inconsistent with h and e.
  void validate() const;
};

inline constexpr PhysicalConstants kSI = PhysicalConstants::codata2018();

}  // namespace scalar_ab
