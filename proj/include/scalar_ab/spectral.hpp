#pragma once

// Sideband spectra of phase-modulated wavefunctions. A potential energy U(t)
// with period T = 2 pi / omega multiplies the wavefunction by exp(-i phi(t)),
// phi = (1/hbar) * integral U dt; the periodic part of that factor expands as
//
//   u(t) = sum_n c_n exp(-i n omega t),
//
// so the state is a ladder of quasi-energies E_n = E + n hbar omega with
// weights c_n. For U = U0 cos(omega t), c_n = J_n(U0 / hbar omega).

#include <complex>
#include <map>
#include <vector>

#include "scalar_ab/ab_phase.hpp"
#include "scalar_ab/model.hpp"

namespace scalar_ab {

inline constexpr double kBesselMaxArgument = 1e6;

// Bessel function of the first kind J_n(alpha), any integer n,
// |alpha| < 1e6. Miller's backward recurrence normalised with
// J_0 + 2 sum J_2k = 1; power series for |alpha| < 0.01.
double bessel_j(int n, double alpha);

// Smallest truncation for which the retained Jacobi-Anger weights of a
// depth-alpha modulation sum to 1 within the normalisation tolerance.
int minimum_truncation(double alpha);
// Default: ceil(|alpha|) + 20, widened for large alpha.
int default_truncation(double alpha);

// c_n = J_n(alpha) for |n| <= truncation_n.
SidebandSpectrum jacobi_anger_coeffs(double alpha, int truncation_n, double base_energy = 0.0,
                                     double omega = 1.0);

// Energy E + n hbar omega, with n*hbar*omega also kept as an exact
// two-term sum (hi + lo) so that differences between levels can be formed
// without rounding.
struct QuasiEnergyLevel {
  int n = 0;
  double energy = 0.0;
  double offset_hi = 0.0;
  double offset_lo = 0.0;
};

std::vector<QuasiEnergyLevel> quasi_energy_ladder(double base_energy, double omega, int n_lo,
                                                  int n_hi);

// E_{n+1} - E_n evaluated exactly from the level offsets and rounded once;
// equals hbar * omega bit for bit. Requires upper.n == lower.n + 1.
double ladder_spacing(const QuasiEnergyLevel& lower, const QuasiEnergyLevel& upper);

struct FloquetDecomposition {
  double quasi_energy = 0.0;    // base energy plus the mean of U
  double mean_potential = 0.0;  // J
  double omega = 0.0;
  std::map<int, std::complex<double>> coefficients;
  int truncation_n = 0;
  double residual = 0.0;  // max |u_truncated - u| over the sampling grid
  int samples_per_period = 0;

  SidebandSpectrum spectrum() const;
};

struct FloquetOptions {
  double residual_tol = 1e-8;
  int max_truncation = 1 << 17;
};

// Temporal Bloch decomposition of an arbitrary periodic potential energy
// (J). truncation_n <= 0 picks a default; the truncation then doubles until
// the reconstruction residual drops below the tolerance. Time origin t = 0.
FloquetDecomposition floquet_decompose(const DriveWaveform& potential, double base_energy,
                                       int truncation_n = 0, const FloquetOptions& opts = {});

// Independent numerical route: discrete Fourier transform of exp(-i phi(t))
// over a uniform grid spanning an integer number of periods, with at least
// 16 * truncation_n samples per period.
SidebandSpectrum fm_spectrum_via_fft(const PhaseHistory& phase_history, double omega,
                                     int truncation_n, double base_energy = 0.0);

}  // namespace scalar_ab
