#pragma once

// Shared value types. Every type validates its invariants on construction
// and is immutable afterwards. All quantities are SI.

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "scalar_ab/constants.hpp"

namespace scalar_ab {

// Primary lumped-element values of the caged Josephson circuit.
struct CircuitElements {
  double c_sphere = 0.0;     // F
  double c_sigma = 0.0;      // F, total capacitance
  double c_gate = 0.0;       // F
  double c_prime = 0.0;      // F, island capacitance
  double inductance = 0.0;   // H, may be +inf (no inductive shunt)
  double e_josephson = 0.0;  // J
  double c_josephson = 0.0;  // F

  bool operator==(const CircuitElements&) const = default;
};

class CircuitParams {
 public:
  explicit CircuitParams(const CircuitElements& elements);

  const CircuitElements& elements() const { return elements_; }
  double c_sphere() const { return elements_.c_sphere; }
  double c_sigma() const { return elements_.c_sigma; }
  double c_gate() const { return elements_.c_gate; }
  double c_prime() const { return elements_.c_prime; }
  double inductance() const { return elements_.inductance; }
  double e_josephson() const { return elements_.e_josephson; }
  double c_josephson() const { return elements_.c_josephson; }

  // Josephson inductance (hbar/2e)^2 / E_J; +inf when E_J == 0.
  double l_josephson() const { return l_josephson_; }
  // Inductive energy (hbar/2e)^2 / L; 0 when L is infinite.
  double e_inductive() const { return e_inductive_; }
  // Charging energy (2e)^2 / (2 C_sigma).
  double e_charging() const { return e_charging_; }

  bool operator==(const CircuitParams& o) const { return elements_ == o.elements_; }

 private:
  CircuitElements elements_;
  double l_josephson_;
  double e_inductive_;
  double e_charging_;
};

enum class WaveformKind { Sinusoid, Sampled };

struct Sample {
  double t = 0.0;
  double value = 0.0;
  bool operator==(const Sample&) const = default;
};

// A periodic scalar signal: a voltage (V) or a potential energy (J).
//
// Sinusoid: value(t) = offset + amplitude * cos(omega t + phase0).
// Sampled:  linear interpolation between samples spanning exactly one period;
//           evaluation outside the span repeats the period unless periodic
//           extension is disabled, in which case it is rejected.
class DriveWaveform {
 public:
  static DriveWaveform sinusoid(double amplitude, double omega,
                                double phase0 = 0.0, double offset = 0.0);

  // `derivative` (same time stamps) is optional; the circuit equation of
  // motion needs it because the drive enters through dV/dt.
  static DriveWaveform sampled(std::vector<Sample> samples,
                               std::optional<std::vector<Sample>> derivative = std::nullopt,
                               bool periodic_extension = true);

  WaveformKind kind() const { return kind_; }
  // Sinusoid: the cosine amplitude. Sampled: max |value - mean|.
  double amplitude() const { return amplitude_; }
  double omega() const { return omega_; }
  double phase0() const { return phase0_; }
  double offset() const { return offset_; }
  double period() const { return period_; }
  const std::vector<Sample>& samples() const { return samples_; }
  const std::optional<std::vector<Sample>>& derivative_samples() const { return derivative_; }
  bool periodic_extension() const { return periodic_; }

  // Start and end of the interval on which the waveform is defined.
  // Infinite for sinusoids and periodically extended samples.
  double defined_from() const;
  double defined_until() const;
  bool covers(double a, double b) const;

  double value(double t) const;
  bool has_derivative() const;
  double derivative(double t) const;

  // Time average over one period.
  double mean() const;

  // Times in (a, b) where the waveform is not smooth (sample instants).
  std::vector<double> breakpoints(double a, double b) const;

  bool operator==(const DriveWaveform&) const = default;

 private:
  DriveWaveform() = default;
  double wrap(double t) const;
  static double interpolate(const std::vector<Sample>& s, double t);

  WaveformKind kind_ = WaveformKind::Sinusoid;
  double amplitude_ = 0.0;
  double omega_ = 0.0;
  double phase0_ = 0.0;
  double offset_ = 0.0;
  double period_ = 0.0;
  std::vector<Sample> samples_;
  std::optional<std::vector<Sample>> derivative_;
  bool periodic_ = true;
};

// Snapshot of the settings that produced a trajectory.
struct TrajectoryMeta {
  double omega_c = 0.0;
  double nonlinear_coeff = 0.0;
  double drive_coeff = 0.0;
  double drive_omega = 0.0;
  double drive_on = 0.0;
  double drive_off = 0.0;
  double ramp = 0.0;
  std::string method;
  double rel_tol = 0.0;
  double abs_tol = 0.0;
  long accepted_steps = 0;
  long rejected_steps = 0;

  bool operator==(const TrajectoryMeta&) const = default;
};

class Trajectory {
 public:
  Trajectory(std::vector<double> times, std::vector<double> delta_phi,
             std::vector<double> delta_phi_dot, TrajectoryMeta meta = {});

  const std::vector<double>& times() const { return times_; }
  const std::vector<double>& delta_phi() const { return delta_phi_; }
  const std::vector<double>& delta_phi_dot() const { return delta_phi_dot_; }
  const TrajectoryMeta& meta() const { return meta_; }
  std::size_t size() const { return times_.size(); }

  bool operator==(const Trajectory&) const = default;

 private:
  std::vector<double> times_;
  std::vector<double> delta_phi_;
  std::vector<double> delta_phi_dot_;
  TrajectoryMeta meta_;
};

inline constexpr double kNormalizationTolerance = 1e-9;

// Quasi-energy ladder E + n hbar omega with complex weight per harmonic n.
class SidebandSpectrum {
 public:
  SidebandSpectrum(double base_energy, double omega,
                   std::map<int, std::complex<double>> coefficients,
                   int truncation_n,
                   double norm_tolerance = kNormalizationTolerance);

  double base_energy() const { return base_energy_; }
  double omega() const { return omega_; }
  const std::map<int, std::complex<double>>& coefficients() const { return coefficients_; }
  int truncation_n() const { return truncation_n_; }

  std::complex<double> coefficient(int n) const;
  double energy(int n) const;
  double norm() const;

  bool operator==(const SidebandSpectrum&) const = default;

 private:
  double base_energy_;
  double omega_;
  std::map<int, std::complex<double>> coefficients_;
  int truncation_n_;
};

// Spherical mass shell with M(t) = m0 + m1 cos(omega t).
class MassShell {
 public:
  MassShell(double m0, double m1, double radius, double omega);

  double m0() const { return m0_; }
  double m1() const { return m1_; }
  double radius() const { return radius_; }
  double omega() const { return omega_; }

  bool operator==(const MassShell&) const = default;

 private:
  double m0_, m1_, radius_, omega_;
};

// Level energies and rest masses are stored redundantly; the constructor
// checks m_f - m_i == (E_f - E_i)/c^2.
//
// For an atom the gap dm is some 1e-8 of m_i or less, below the resolution
// of m_f itself, so m_f is kept as an unevaluated sum m_f + residual and
// the gap is formed from both parts.
class TwoLevelAtom {
 public:
  TwoLevelAtom(double energy_i, double energy_f, double rest_mass_i,
               double rest_mass_f, double charge = 0.0,
               double rest_mass_f_residual = 0.0);

  // Rest masses from E = m c^2 applied to each level.
  static TwoLevelAtom from_energies(double energy_i, double energy_f,
                                    double charge = 0.0);
  // Ground-state rest mass given explicitly, excited mass adds dE/c^2.
  static TwoLevelAtom from_ground_mass(double rest_mass_i, double energy_i,
                                       double energy_f, double charge = 0.0);

  double energy_i() const { return energy_i_; }
  double energy_f() const { return energy_f_; }
  double rest_mass_i() const { return rest_mass_i_; }
  double rest_mass_f() const { return rest_mass_f_; }
  double charge() const { return charge_; }
  double rest_mass_f_residual() const { return rest_mass_f_residual_; }
  double transition_energy() const { return energy_f_ - energy_i_; }
  // (m_f - m_i) + residual; the difference is exact when m_i <= m_f <= 2 m_i.
  double rest_mass_gap() const { return (rest_mass_f_ - rest_mass_i_) + rest_mass_f_residual_; }

  bool operator==(const TwoLevelAtom&) const = default;

 private:
  double energy_i_, energy_f_, rest_mass_i_, rest_mass_f_, charge_, rest_mass_f_residual_;
};

}  // namespace scalar_ab
