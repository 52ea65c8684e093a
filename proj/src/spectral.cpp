#include "scalar_ab/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include "fft.hpp"
#include "scalar_ab/errors.hpp"

namespace scalar_ab {

using detail::require;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double bessel_series(int m, double x) {
  const double half = 0.5 * x;
  double term = 1.0;
  for (int i = 1; i <= m; ++i) term *= half / i;
  double sum = term;
  const double q = half * half;
  for (int k = 1; k < 60; ++k) {
    term *= -q / (static_cast<double>(k) * static_cast<double>(k + m));
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

double bessel_miller(int m, double x) {
  const int base = std::max(m, static_cast<int>(std::ceil(x)));
  int start = base + 25 + static_cast<int>(std::ceil(15.0 * std::cbrt(x)));
  start += start % 2;

  constexpr double kBig = 1e250, kRescale = 1e-250;
  double jp1 = 0.0, j = 1e-30, result = 0.0, norm = 0.0;
  for (int k = start; k >= 1; --k) {
    const double jm1 = (2.0 * k / x) * j - jp1;
    jp1 = j;
    j = jm1;
    const int order = k - 1;
    if (order == m) result = j;
    if (order > 0 && order % 2 == 0) norm += 2.0 * j;
    if (std::abs(j) > kBig) {
      j *= kRescale;
      jp1 *= kRescale;
      result *= kRescale;
      norm *= kRescale;
    }
  }
  norm += j;
  return result / norm;
}

}  // namespace

double bessel_j(int n, double alpha) {
  require(std::isfinite(alpha) && std::abs(alpha) < kBesselMaxArgument,
          "bessel_j: |alpha| must be < 1e6");
  const int m = n < 0 ? -n : n;
  const double x = std::abs(alpha);
  double v;
  if (x == 0.0) {
    v = m == 0 ? 1.0 : 0.0;
  } else if (x < 1e-2) {
    v = bessel_series(m, x);
  } else {
    v = bessel_miller(m, x);
  }
  // J_{-n}(x) = (-1)^n J_n(x) and J_n(-x) = (-1)^n J_n(x).
  const bool odd = m % 2 == 1;
  if (odd && (n < 0) != (alpha < 0.0)) v = -v;
  return v;
}

int minimum_truncation(double alpha) {
  require(std::isfinite(alpha) && std::abs(alpha) < kBesselMaxArgument,
          "minimum_truncation: |alpha| must be finite and < 1e6");
  const double a = std::abs(alpha);
  return static_cast<int>(std::ceil(a)) +
         std::max(10, static_cast<int>(std::ceil(6.0 * std::cbrt(a))));
}

int default_truncation(double alpha) {
  return std::max(static_cast<int>(std::ceil(std::abs(alpha))) + 20, minimum_truncation(alpha));
}

SidebandSpectrum jacobi_anger_coeffs(double alpha, int truncation_n, double base_energy,
                                     double omega) {
  const int needed = minimum_truncation(alpha);
  require(truncation_n >= needed, "jacobi_anger_coeffs: truncation_n = " +
                                      std::to_string(truncation_n) + " is too small for alpha = " +
                                      detail::num(alpha) + "; need at least " +
                                      std::to_string(needed));
  std::map<int, std::complex<double>> c;
  for (int n = -truncation_n; n <= truncation_n; ++n) c.emplace(n, bessel_j(n, alpha));
  return SidebandSpectrum(base_energy, omega, std::move(c), truncation_n);
}

// ---------------------------------------------------------------------------

std::vector<QuasiEnergyLevel> quasi_energy_ladder(double base_energy, double omega, int n_lo,
                                                  int n_hi) {
  require(n_hi >= n_lo, "quasi_energy_ladder: n range must be non-empty");
  require(std::isfinite(base_energy) && std::isfinite(omega),
          "quasi_energy_ladder: inputs must be finite");
  const double quantum = kSI.hbar * omega;
  std::vector<QuasiEnergyLevel> ladder;
  ladder.reserve(static_cast<std::size_t>(n_hi - n_lo) + 1);
  for (int n = n_lo; n <= n_hi; ++n) {
    const double nn = static_cast<double>(n);
    const double hi = nn * quantum;
    const double lo = std::fma(nn, quantum, -hi);
    ladder.push_back({n, base_energy + nn * quantum, hi, lo});
  }
  return ladder;
}

double ladder_spacing(const QuasiEnergyLevel& lower, const QuasiEnergyLevel& upper) {
  require(upper.n == lower.n + 1, "ladder_spacing: levels must be adjacent");
  // Both differences are exact (Sterbenz for hi, small integer multiples of
  // the quantum's ulp for lo); the final sum is the exactly representable
  // quantum.
  return (upper.offset_hi - lower.offset_hi) + (upper.offset_lo - lower.offset_lo);
}

// ---------------------------------------------------------------------------

SidebandSpectrum FloquetDecomposition::spectrum() const {
  return SidebandSpectrum(quasi_energy, omega, coefficients, truncation_n);
}

namespace {

// Periodic part of (1/hbar) * integral_0^t (U - mean U) dt, exact for both
// waveform kinds.
class PeriodicPhase {
 public:
  explicit PeriodicPhase(const DriveWaveform& u) : u_(u), mean_(u.mean()) {
    if (u.kind() == WaveformKind::Sampled) {
      const auto& s = u.samples();
      cumulative_.resize(s.size(), 0.0);
      for (std::size_t k = 1; k < s.size(); ++k)
        cumulative_[k] = cumulative_[k - 1] +
                         0.5 * ((s[k - 1].value - mean_) + (s[k].value - mean_)) * (s[k].t - s[k - 1].t);
      origin_ = primitive(0.0);
    }
  }

  double operator()(double t) const {
    if (u_.kind() == WaveformKind::Sinusoid) {
      const double w = u_.omega();
      return u_.amplitude() / (w * kSI.hbar) * (std::sin(w * t + u_.phase0()) - std::sin(u_.phase0()));
    }
    return (primitive(t) - origin_) / kSI.hbar;
  }

 private:
  // Integral of (U - mean) from the first sample to t, wrapped into one period.
  double primitive(double t) const {
    const auto& s = u_.samples();
    const double t0 = s.front().t, period = u_.period();
    double r = std::fmod(t - t0, period);
    if (r < 0.0) r += period;
    const double tw = t0 + r;
    auto it = std::upper_bound(s.begin(), s.end(), tw,
                               [](double x, const Sample& p) { return x < p.t; });
    const std::size_t k = it == s.begin() ? 0 : static_cast<std::size_t>(it - s.begin()) - 1;
    if (k + 1 >= s.size()) return cumulative_.back();
    const double v0 = s[k].value - mean_;
    const double v1 = s[k + 1].value - mean_;
    const double f = (tw - s[k].t) / (s[k + 1].t - s[k].t);
    const double vt = v0 + f * (v1 - v0);
    return cumulative_[k] + 0.5 * (v0 + vt) * (tw - s[k].t);
  }

  const DriveWaveform& u_;
  double mean_;
  std::vector<double> cumulative_;
  double origin_ = 0.0;
};

}  // namespace

FloquetDecomposition floquet_decompose(const DriveWaveform& potential, double base_energy,
                                       int truncation_n, const FloquetOptions& opts) {
  require(potential.kind() == WaveformKind::Sinusoid || potential.periodic_extension(),
          "floquet_decompose: potential must be periodic");
  require(opts.residual_tol > 0.0 && opts.max_truncation >= 1,
          "floquet_decompose: invalid options");

  const double omega = potential.omega();
  const double alpha = potential.amplitude() / (kSI.hbar * omega);
  int trunc = truncation_n > 0 ? truncation_n
                               : (potential.kind() == WaveformKind::Sinusoid ? default_truncation(alpha) : 32);
  const PeriodicPhase phase(potential);

  for (;;) {
    const std::size_t m = std::max<std::size_t>(64, detail::next_power_of_two(16 * static_cast<std::size_t>(trunc)));
    require(static_cast<std::size_t>(2 * trunc + 1) <= m, "floquet_decompose: internal sizing");
    const double period = potential.period();
    std::vector<std::complex<double>> exact(m);
    for (std::size_t j = 0; j < m; ++j) {
      const double t = period * static_cast<double>(j) / static_cast<double>(m);
      exact[j] = std::polar(1.0, -phase(t));
    }

    // c_n = (1/M) sum_j u_j exp(+2 pi i n j / M) for the basis exp(-i n w t).
    std::vector<std::complex<double>> bins = exact;
    detail::fft_radix2(bins, +1);
    const double inv_m = 1.0 / static_cast<double>(m);
    for (auto& b : bins) b *= inv_m;

    std::vector<std::complex<double>> kept(m);
    std::map<int, std::complex<double>> coeffs;
    for (int n = -trunc; n <= trunc; ++n) {
      const std::size_t k = n >= 0 ? static_cast<std::size_t>(n) : m - static_cast<std::size_t>(-n);
      coeffs.emplace(n, bins[k]);
      kept[k] = bins[k];
    }
    detail::fft_radix2(kept, -1);
    double residual = 0.0;
    for (std::size_t j = 0; j < m; ++j) residual = std::max(residual, std::abs(kept[j] - exact[j]));

    if (residual < opts.residual_tol) {
      FloquetDecomposition d;
      d.mean_potential = potential.mean();
      d.quasi_energy = base_energy + d.mean_potential;
      d.omega = omega;
      d.coefficients = std::move(coeffs);
      d.truncation_n = trunc;
      d.residual = residual;
      d.samples_per_period = static_cast<int>(m);
      return d;
    }
    if (trunc >= opts.max_truncation)
      throw NumericError("floquet_decompose: reconstruction residual " + detail::num(residual) +
                         " still above tolerance at truncation " + std::to_string(trunc));
    trunc = std::min(2 * trunc, opts.max_truncation);
  }
}

// ---------------------------------------------------------------------------

namespace {

// FFTW's planner is not re-entrant.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

SidebandSpectrum fm_spectrum_via_fft(const PhaseHistory& history, double omega, int truncation_n,
                                     double base_energy) {
  require(omega > 0.0 && std::isfinite(omega), "fm_spectrum_via_fft: omega must be > 0");
  require(truncation_n >= 0, "fm_spectrum_via_fft: truncation_n must be >= 0");
  const auto& t = history.times();
  const auto& phi = history.phase();
  require(t.size() >= 3, "fm_spectrum_via_fft: need at least three samples");

  const std::size_t k_len = t.size() - 1;  // last sample closes the span
  const double span = t.back() - t.front();
  const double dt = span / static_cast<double>(k_len);
  for (std::size_t j = 0; j < t.size(); ++j)
    require(std::abs(t[j] - (t.front() + static_cast<double>(j) * dt)) <= 1e-9 * dt,
            "fm_spectrum_via_fft: grid must be uniform");

  const double periods_real = span * omega / kTwoPi;
  const double periods = std::round(periods_real);
  require(periods >= 1.0 && std::abs(periods_real - periods) <= 1e-9 * periods,
          "fm_spectrum_via_fft: span must cover an integer number of periods (spectral leakage)");
  const auto p = static_cast<std::size_t>(periods);
  require(static_cast<double>(k_len) / periods >= 16.0 * truncation_n,
          "fm_spectrum_via_fft: need at least 16 * truncation_n samples per period");

  std::vector<std::complex<double>> buf(k_len);
  for (std::size_t j = 0; j < k_len; ++j) buf[j] = std::polar(1.0, -phi[j]);

  auto* io = reinterpret_cast<fftw_complex*>(buf.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(k_len), io, io, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }

  std::map<int, std::complex<double>> c;
  const double inv = 1.0 / static_cast<double>(k_len);
  for (int n = -truncation_n; n <= truncation_n; ++n) {
    const long long raw = static_cast<long long>(n) * static_cast<long long>(p);
    const long long len = static_cast<long long>(k_len);
    const auto bin = static_cast<std::size_t>(((raw % len) + len) % len);
    const auto shift = std::polar(1.0, static_cast<double>(n) * omega * t.front());
    c.emplace(n, shift * buf[bin] * inv);
  }
  return SidebandSpectrum(base_energy, omega, std::move(c), truncation_n);
}

}  // namespace scalar_ab
