#include "scalar_ab/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "scalar_ab/errors.hpp"

namespace scalar_ab {

using detail::require;

namespace {

bool positive(double x) { return x > 0.0 && !std::isnan(x); }

std::string str(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

void PhysicalConstants::validate() const {
  require(positive(h) && positive(hbar) && positive(e_charge) && positive(c_light) &&
              positive(G_newton) && positive(flux_quantum),
          "PhysicalConstants: all constants must be strictly positive");
  require(flux_quantum == h / (2.0 * e_charge),
          "PhysicalConstants: flux_quantum must equal h / (2 e_charge)");
}

// ---------------------------------------------------------------------------

CircuitParams::CircuitParams(const CircuitElements& el) : elements_(el) {
  require(positive(el.c_sphere), "CircuitParams: c_sphere must be > 0");
  require(positive(el.c_sigma) && std::isfinite(el.c_sigma), "CircuitParams: c_sigma must be > 0");
  require(positive(el.c_gate), "CircuitParams: c_gate must be > 0");
  require(positive(el.c_prime), "CircuitParams: c_prime must be > 0");
  require(positive(el.inductance), "CircuitParams: inductance must be > 0");
  require(positive(el.c_josephson), "CircuitParams: c_josephson must be > 0");
  require(el.e_josephson >= 0.0 && std::isfinite(el.e_josephson),
          "CircuitParams: e_josephson must be finite and >= 0");
  require(el.c_sigma >= el.c_josephson,
          "CircuitParams: c_sigma must be >= c_josephson (total includes the junction)");

  const double phi0r = kSI.reduced_flux_quantum();
  l_josephson_ = el.e_josephson > 0.0 ? phi0r * phi0r / el.e_josephson
                                      : std::numeric_limits<double>::infinity();
  e_inductive_ = phi0r * phi0r / el.inductance;
  const double two_e = 2.0 * kSI.e_charge;
  e_charging_ = two_e * two_e / (2.0 * el.c_sigma);
}

// ---------------------------------------------------------------------------

DriveWaveform DriveWaveform::sinusoid(double amplitude, double omega, double phase0,
                                      double offset) {
  require(positive(omega) && std::isfinite(omega), "DriveWaveform: omega must be > 0");
  require(std::isfinite(amplitude) && std::isfinite(phase0) && std::isfinite(offset),
          "DriveWaveform: amplitude, phase0 and offset must be finite");
  DriveWaveform w;
  w.kind_ = WaveformKind::Sinusoid;
  w.amplitude_ = amplitude;
  w.omega_ = omega;
  w.phase0_ = phase0;
  w.offset_ = offset;
  w.period_ = 2.0 * std::numbers::pi / omega;
  return w;
}

namespace {

void check_samples(const std::vector<Sample>& s, const char* which) {
  const std::string tag = std::string("DriveWaveform: ") + which;
  require(s.size() >= 2, tag + " needs at least two samples");
  for (std::size_t k = 0; k < s.size(); ++k) {
    require(std::isfinite(s[k].t) && std::isfinite(s[k].value), tag + " must be finite");
    if (k > 0) require(s[k].t > s[k - 1].t, tag + " timestamps must be strictly increasing");
  }
}

}  // namespace

DriveWaveform DriveWaveform::sampled(std::vector<Sample> samples,
                                     std::optional<std::vector<Sample>> derivative,
                                     bool periodic_extension) {
  check_samples(samples, "samples");
  require(samples.front().value == samples.back().value,
          "DriveWaveform: sampled waveform must be periodic (first value == last value)");
  if (derivative) {
    check_samples(*derivative, "derivative samples");
    require(derivative->size() == samples.size(),
            "DriveWaveform: derivative samples must share the sample time stamps");
    for (std::size_t k = 0; k < samples.size(); ++k)
      require((*derivative)[k].t == samples[k].t,
              "DriveWaveform: derivative samples must share the sample time stamps");
    require(derivative->front().value == derivative->back().value,
            "DriveWaveform: derivative samples must be periodic");
  }
  DriveWaveform w;
  w.kind_ = WaveformKind::Sampled;
  w.period_ = samples.back().t - samples.front().t;
  w.omega_ = 2.0 * std::numbers::pi / w.period_;
  w.samples_ = std::move(samples);
  w.derivative_ = std::move(derivative);
  w.periodic_ = periodic_extension;
  const double m = w.mean();
  for (const auto& s : w.samples_) w.amplitude_ = std::max(w.amplitude_, std::abs(s.value - m));
  w.offset_ = m;
  return w;
}

double DriveWaveform::defined_from() const {
  if (kind_ == WaveformKind::Sinusoid || periodic_) return -std::numeric_limits<double>::infinity();
  return samples_.front().t;
}

double DriveWaveform::defined_until() const {
  if (kind_ == WaveformKind::Sinusoid || periodic_) return std::numeric_limits<double>::infinity();
  return samples_.back().t;
}

bool DriveWaveform::covers(double a, double b) const {
  return a >= defined_from() && b <= defined_until();
}

double DriveWaveform::wrap(double t) const {
  const double t0 = samples_.front().t;
  if (!periodic_) {
    require(t >= t0 && t <= samples_.back().t,
            "DriveWaveform: time " + str(t) + " outside the sampled span [" + str(t0) + ", " +
                str(samples_.back().t) + "]");
    return t;
  }
  if (t >= t0 && t <= samples_.back().t) return t;
  double r = std::fmod(t - t0, period_);
  if (r < 0.0) r += period_;
  return t0 + r;
}

double DriveWaveform::interpolate(const std::vector<Sample>& s, double t) {
  auto it = std::upper_bound(s.begin(), s.end(), t,
                             [](double x, const Sample& p) { return x < p.t; });
  if (it == s.begin()) return s.front().value;
  if (it == s.end()) return s.back().value;
  const Sample& hi = *it;
  const Sample& lo = *(it - 1);
  const double w = (t - lo.t) / (hi.t - lo.t);
  return lo.value + w * (hi.value - lo.value);
}

double DriveWaveform::value(double t) const {
  if (kind_ == WaveformKind::Sinusoid) return offset_ + amplitude_ * std::cos(omega_ * t + phase0_);
  return interpolate(samples_, wrap(t));
}

bool DriveWaveform::has_derivative() const {
  return kind_ == WaveformKind::Sinusoid || derivative_.has_value();
}

double DriveWaveform::derivative(double t) const {
  if (kind_ == WaveformKind::Sinusoid)
    return -amplitude_ * omega_ * std::sin(omega_ * t + phase0_);
  require(derivative_.has_value(), "DriveWaveform: sampled waveform carries no derivative samples");
  return interpolate(*derivative_, wrap(t));
}

double DriveWaveform::mean() const {
  if (kind_ == WaveformKind::Sinusoid) return offset_;
  double area = 0.0;
  for (std::size_t k = 1; k < samples_.size(); ++k)
    area += 0.5 * (samples_[k].value + samples_[k - 1].value) * (samples_[k].t - samples_[k - 1].t);
  return area / period_;
}

std::vector<double> DriveWaveform::breakpoints(double a, double b) const {
  std::vector<double> out;
  if (kind_ == WaveformKind::Sinusoid || !(b > a)) return out;
  const double t0 = samples_.front().t;
  const double first_period = std::floor((a - t0) / period_);
  for (double p = first_period;; p += 1.0) {
    const double base = t0 + p * period_;
    if (base > b) break;
    for (std::size_t k = 0; k + 1 < samples_.size(); ++k) {
      const double t = base + (samples_[k].t - t0);
      if (t > a && t < b) out.push_back(t);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

Trajectory::Trajectory(std::vector<double> times, std::vector<double> delta_phi,
                       std::vector<double> delta_phi_dot, TrajectoryMeta meta)
    : times_(std::move(times)),
      delta_phi_(std::move(delta_phi)),
      delta_phi_dot_(std::move(delta_phi_dot)),
      meta_(std::move(meta)) {
  require(times_.size() == delta_phi_.size() && times_.size() == delta_phi_dot_.size(),
          "Trajectory: times, delta_phi and delta_phi_dot must have equal length");
  for (std::size_t k = 1; k < times_.size(); ++k)
    require(times_[k] > times_[k - 1], "Trajectory: times must be strictly increasing");
}

// ---------------------------------------------------------------------------

SidebandSpectrum::SidebandSpectrum(double base_energy, double omega,
                                   std::map<int, std::complex<double>> coefficients,
                                   int truncation_n, double norm_tolerance)
    : base_energy_(base_energy),
      omega_(omega),
      coefficients_(std::move(coefficients)),
      truncation_n_(truncation_n) {
  require(positive(omega), "SidebandSpectrum: omega must be > 0");
  require(truncation_n >= 0, "SidebandSpectrum: truncation_n must be >= 0");
  for (const auto& [n, c] : coefficients_)
    require(std::abs(n) <= truncation_n, "SidebandSpectrum: coefficient index beyond truncation_n");
  const double s = norm();
  require(std::abs(s - 1.0) <= norm_tolerance,
          "SidebandSpectrum: normalization sum |c_n|^2 = " + str(s) + " deviates from 1 by more than " +
              str(norm_tolerance));
}

std::complex<double> SidebandSpectrum::coefficient(int n) const {
  auto it = coefficients_.find(n);
  return it == coefficients_.end() ? std::complex<double>{} : it->second;
}

double SidebandSpectrum::energy(int n) const {
  return base_energy_ + static_cast<double>(n) * (kSI.hbar * omega_);
}

double SidebandSpectrum::norm() const {
  double s = 0.0;
  for (const auto& [n, c] : coefficients_) s += std::norm(c);
  return s;
}

// ---------------------------------------------------------------------------

MassShell::MassShell(double m0, double m1, double radius, double omega)
    : m0_(m0), m1_(m1), radius_(radius), omega_(omega) {
  require(positive(radius) && std::isfinite(radius), "MassShell: radius must be > 0");
  require(m0 >= 0.0 && std::isfinite(m0), "MassShell: m0 must be >= 0");
  require(std::isfinite(m1) && std::abs(m1) <= m0, "MassShell: |m1| must not exceed m0");
  require(omega >= 0.0 && std::isfinite(omega), "MassShell: omega must be >= 0");
}

// ---------------------------------------------------------------------------

TwoLevelAtom::TwoLevelAtom(double energy_i, double energy_f, double rest_mass_i,
                           double rest_mass_f, double charge, double rest_mass_f_residual)
    : energy_i_(energy_i),
      energy_f_(energy_f),
      rest_mass_i_(rest_mass_i),
      rest_mass_f_(rest_mass_f),
      charge_(charge),
      rest_mass_f_residual_(rest_mass_f_residual) {
  require(std::isfinite(energy_i) && std::isfinite(energy_f) && std::isfinite(rest_mass_i) &&
              std::isfinite(rest_mass_f) && std::isfinite(charge) &&
              std::isfinite(rest_mass_f_residual),
          "TwoLevelAtom: all fields must be finite");
  require(energy_f > energy_i, "TwoLevelAtom: energy_f must exceed energy_i");
  require(rest_mass_i >= 0.0, "TwoLevelAtom: rest masses must be >= 0");
  require(std::abs(rest_mass_f_residual) <= std::numeric_limits<double>::epsilon() * rest_mass_f,
          "TwoLevelAtom: rest_mass_f_residual must be below the resolution of rest_mass_f");
  const double c2 = kSI.c_light * kSI.c_light;
  const double expected = (energy_f - energy_i) / c2;
  const double stored = rest_mass_gap();
  // Masses given without a residual round at the scale of the larger mass.
  const double slack = 4.0 * std::numeric_limits<double>::epsilon() *
                           std::max(std::abs(rest_mass_i), std::abs(rest_mass_f)) +
                       1e-9 * std::abs(expected);
  require(std::abs(stored - expected) <= slack,
          "TwoLevelAtom: rest_mass_f - rest_mass_i must equal (energy_f - energy_i)/c^2");
}

TwoLevelAtom TwoLevelAtom::from_energies(double energy_i, double energy_f, double charge) {
  const double c2 = kSI.c_light * kSI.c_light;
  return from_ground_mass(energy_i / c2, energy_i, energy_f, charge);
}

TwoLevelAtom TwoLevelAtom::from_ground_mass(double rest_mass_i, double energy_i,
                                            double energy_f, double charge) {
  const double c2 = kSI.c_light * kSI.c_light;
  const double dm = (energy_f - energy_i) / c2;
  // Two-sum: m_i + dm == m_f + residual exactly.
  const double m_f = rest_mass_i + dm;
  const double back = m_f - rest_mass_i;
  const double residual = (rest_mass_i - (m_f - back)) + (dm - back);
  return TwoLevelAtom(energy_i, energy_f, rest_mass_i, m_f, charge, residual);
}

}  // namespace scalar_ab
