// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "app.hpp"
#include "config.hpp"
#include "scalar_ab/ab_phase.hpp"
#include "scalar_ab/circuit_dynamics.hpp"
#include "scalar_ab/grav_redshift.hpp"
#include "scalar_ab/presets.hpp"
#include "scalar_ab/spectral.hpp"

using namespace scalar_ab;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;
const double kC2 = kSI.c_light * kSI.c_light;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

double sum_sq(const SidebandSpectrum& s) {
  double acc = 0.0;
  for (const auto& [n, c] : s.coefficients()) acc += std::norm(c);
  return acc;
}

// exp(-i alpha sin(omega t)) sampled over one period.
PhaseHistory sine_phase(double alpha, double omega, std::size_t steps) {
  auto t = uniform_grid(0.0, 2 * kPi / omega, steps);
  std::vector<double> p(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) p[k] = alpha * std::sin(omega * t[k]);
  return PhaseHistory(std::move(t), std::move(p));
}

Outcome ac1() {
  const double omega = 2 * kPi * 1e6;
  double worst = 0.0;
  for (double alpha : {0.1, 1.0, 5.0, 10.0}) {
    const int n = static_cast<int>(std::ceil(alpha)) + 20;
    const auto ja = jacobi_anger_coeffs(alpha, n, 0.0, omega);
    const auto fft = fm_spectrum_via_fft(sine_phase(alpha, omega, 1 << 12), omega, n);
    for (int k = -n; k <= n; ++k)
      worst = std::max(worst, std::abs(ja.coefficient(k) - fft.coefficient(k)));
  }
  return {worst <= 1e-8, "max |c_JA - c_FFT| = " + fmt("%.2e", worst)};
}

Outcome ac2() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> ua(0.0, 40.0), uu(-1.0, 1.0), u01(0.0, 1.0);
  const double omega = 2 * kPi * 1e7;
  double worst = 0.0;
  int spectra = 0;
  auto note = [&](const SidebandSpectrum& s) {
    worst = std::max(worst, std::abs(sum_sq(s) - 1.0));
    ++spectra;
  };
  for (int rep = 0; rep < 60; ++rep) {
    const double alpha = ua(rng);
    note(jacobi_anger_coeffs(alpha, default_truncation(alpha), 0.0, omega));
    const auto u = DriveWaveform::sinusoid(alpha * kSI.hbar * omega, omega, kPi * uu(rng));
    note(floquet_decompose(u, 1e-24).spectrum());
    const int n = default_truncation(alpha);
    const std::size_t per = std::max<std::size_t>(1024, 32 * static_cast<std::size_t>(n));
    note(fm_spectrum_via_fft(sine_phase(alpha, omega, per), omega, n));
  }
  for (int rep = 0; rep < 10; ++rep) {
    const double period = 2 * kPi / omega;
    // Jittered knots, at least a fifth of the mean spacing apart.
    const int knots = 4 + static_cast<int>(rng() % 12);
    std::vector<double> ts{0.0};
    for (int k = 1; k < knots; ++k) ts.push_back(period * (k + 0.8 * (u01(rng) - 0.5)) / knots);
    ts.push_back(period);
    std::vector<Sample> s;
    const double scale = 3.0 * kSI.hbar * omega;
    for (double t : ts) s.push_back({t, scale * uu(rng)});
    s.back().value = s.front().value;
    note(floquet_decompose(DriveWaveform::sampled(s), 0.0).spectrum());
  }
  const auto atom = presets::earth_atom();
  for (const auto& shell : {presets::earth_shell(), presets::supernova_shell()}) {
    const auto t = transition_sideband_spectrum(atom, shell);
    double acc = 0.0;
    for (const auto& l : t.sideband_lines) acc += l.relative_amplitude * l.relative_amplitude;
    worst = std::max(worst, std::abs(acc - 1.0));
    ++spectra;
  }
  return {worst <= 1e-9 && spectra >= 190,
          std::to_string(spectra) + " spectra, max |sum |c_n|^2 - 1| = " + fmt("%.2e", worst)};
}

Outcome ac3() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ue(-1e-18, 1e-18), uw(0.0, 25.0);
  long checked = 0, bad = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const double e = ue(rng);
    const double w = std::pow(10.0, uw(rng));
    const double quantum = kSI.hbar * w;
    const auto ladder = quasi_energy_ladder(e, w, -300, 300);
    for (std::size_t k = 1; k < ladder.size(); ++k, ++checked)
      if (ladder_spacing(ladder[k - 1], ladder[k]) != quantum) ++bad;
  }
  return {bad == 0 && checked > 0,
          std::to_string(checked) + " adjacent pairs, " + std::to_string(bad) + " not equal to hbar*omega"};
}

Outcome ac4() {
  auto e = presets::fig3_elements();
  e.e_josephson = 0.0;
  const CircuitParams p(e);
  const auto eom = build_eom(p, DriveWaveform::sinusoid(0.0, 1.0));
  const double wc = eom.omega_c;
  IntegratorOptions opt;
  opt.output_samples = 20001;
  const auto tr = integrate_trajectory(eom, 0.1, 0.0, 0.0, 100 * 2 * kPi / wc,
                                       DriveEnvelope::always_on(), opt);
  double err = 0.0;
  for (std::size_t k = 0; k < tr.size(); ++k)
    err = std::max(err, std::abs(tr.delta_phi()[k] - 0.1 * std::cos(wc * tr.times()[k])));
  return {err < 1e-8, "max |dphi - 0.1 cos(w_C t)| = " + fmt("%.2e", err)};
}

Outcome ac5() {
  double worst = 0.0;
  for (double phi0 : {0.5, 2.5}) {
    const auto eom = build_eom(presets::fig3_circuit(), DriveWaveform::sinusoid(0.0, 1.0));
    const double t1 = 1e4 * 2 * kPi / eom.linear_frequency();
    const auto tr = integrate_trajectory(eom, phi0, 0.0, 0.0, t1);
    const double e0 = eom.energy(phi0, 0.0);
    for (std::size_t k = 0; k < tr.size(); ++k)
      worst = std::max(worst,
                       std::abs(eom.energy(tr.delta_phi()[k], tr.delta_phi_dot()[k]) - e0) / e0);
  }
  return {worst < 1e-6, "max relative energy drift over 1e4 periods = " + fmt("%.2e", worst)};
}

Outcome ac6() {
  const auto sc = presets::fig3_scenario();
  const auto eom = build_eom(sc.circuit, sc.drive);
  IntegratorOptions opt;
  opt.output_samples = sc.output_samples;
  const auto tr = integrate_trajectory(eom, 0.0, 0.0, 0.0, sc.t_end, sc.envelope, opt);
  double peak = 0.0;
  for (double x : tr.delta_phi()) peak = std::max(peak, std::abs(x));
  const double floor = 10.0 * std::max(opt.abs_tol, opt.rel_tol * peak);
  std::size_t post = 0, above = 0;
  for (std::size_t k = 0; k < tr.size(); ++k) {
    if (!(tr.times()[k] > sc.envelope.off)) continue;
    ++post;
    if (std::abs(tr.delta_phi()[k]) > floor) ++above;
  }
  const double frac = post ? static_cast<double>(above) / static_cast<double>(post) : 0.0;
  return {post > 0 && sc.envelope.off < sc.t_end && frac >= 0.9,
          fmt("%.4f", frac) + " of " + std::to_string(post) + " post-drive samples above " +
              fmt("%.1e", floor) + " rad"};
}

Outcome ac7() {
  const auto p = presets::fig4_circuit();
  const double range = 4 * kPi;
  const auto land = potential_landscape(p, -range, range, 4001);
  const std::size_t n = land.minima.size();
  // U'(phi) = (hbar/2e)^2 phi / L + E_J sin(phi), scaled by E_J.
  const double phi0r = kSI.reduced_flux_quantum();
  double asym = 0.0, slope = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double x = land.minima[k].phi;
    asym = std::max(asym, std::abs(x + land.minima[n - 1 - k].phi));
    slope = std::max(slope, std::abs(phi0r * phi0r * x / p.inductance() / p.e_josephson() + std::sin(x)));
  }
  const bool ej = std::abs(p.e_josephson() / kSI.h - 25e9) < 1e-3 &&
                  std::abs(p.e_inductive() / kSI.h - 1e9) < 1e-3;
  return {ej && n >= 3 && asym <= 1e-9 && slope <= 1e-9,
          std::to_string(n) + " minima in [-4pi, 4pi], max |phi_k + phi_-k| = " + fmt("%.1e", asym) +
              ", max |U'|/E_J = " + fmt("%.1e", slope)};
}

Outcome ac8() {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0), mag(0.0, 9.0);
  int histories = 0;
  bool cancel = true;
  for (int rep = 0; rep < 50; ++rep, ++histories) {
    const double scale = std::pow(10.0, mag(rng));
    const auto grid = uniform_grid(0.0, 1e-6, 257);
    std::vector<double> ph(grid.size(), 0.0);
    for (std::size_t k = 1; k < grid.size(); ++k) ph[k] = ph[k - 1] + scale * u(rng);
    const double base = std::abs(u(rng)) * std::pow(10.0, 10.0 * u(rng));
    const double r = ion_cancellation_check(PhaseHistory(grid, ph), base);
    if (std::abs(r - base) > std::nextafter(base, 2 * base + 1.0) - base) cancel = false;
  }

  const auto atom = presets::earth_atom();
  const double omega = 2 * kPi * 50.0, radius = 1e8;
  const double m1 = 5.0 * kSI.hbar * omega * radius / (kSI.G_newton * atom.transition_energy() / kC2);
  const auto spec = transition_sideband_spectrum(atom, MassShell(10.0 * m1, m1, radius, omega));
  const int n = spec.truncation_n;
  const auto fft = fm_spectrum_via_fft(sine_phase(spec.delta_alpha, omega, 1 << 12), omega, n);
  int strong = 0, fft_strong = 0, best = 0, fft_best = 0;
  double best_amp = 0.0, fft_amp = 0.0, dev = 0.0;
  for (const auto& l : spec.sideband_lines) {
    if (l.relative_amplitude > 0.01) ++strong;
    if (l.relative_amplitude > best_amp) best_amp = l.relative_amplitude, best = l.n;
    dev = std::max(dev, std::abs(l.relative_amplitude - std::abs(fft.coefficient(l.n))));
  }
  for (int k = -n; k <= n; ++k) {
    const double a = std::abs(fft.coefficient(k));
    if (a > 0.01) ++fft_strong;
    if (a > fft_amp) fft_amp = a, fft_best = k;
  }
  const bool dominant = (std::abs(best) == 4 || std::abs(best) == 5) && std::abs(fft_best) == std::abs(best);
  return {cancel && strong >= 9 && fft_strong == strong && dominant && dev <= 1e-8,
          std::to_string(histories) + " histories cancel: " + (cancel ? "yes" : "no") +
              "; delta_alpha = " + fmt("%.6f", spec.delta_alpha) + ", " + std::to_string(strong) +
              " lines > 1%, dominant |n| = " + std::to_string(std::abs(best)) +
              ", max |JA - FFT| = " + fmt("%.1e", dev)};
}

Outcome ac9() {
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double amu = 1.66053906660e-27;
  double worst = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const double mass = amu * (1.0 + 250.0 * u(rng));
    const double de = kSI.h * std::pow(10.0, 8.0 + 9.0 * u(rng));  // 100 MHz .. 100 PHz
    // Level energies measured from a reference a few eV below the ground state.
    const double e_i = kSI.e_charge * 10.0 * u(rng);
    const auto atom = rep % 2 ? TwoLevelAtom::from_ground_mass(mass, e_i, e_i + de)
                              : TwoLevelAtom::from_energies(e_i, e_i + de);
    const double m0 = std::pow(10.0, 20.0 + 12.0 * u(rng));
    const double m1 = m0 * u(rng);
    const double r = std::pow(10.0, 5.0 + 6.0 * u(rng));
    const double w = 2 * kPi * std::pow(10.0, -3.0 + 6.0 * u(rng));
    const MassShell shell(m0, m1, r, w);
    const double via_masses = modulation_indices(atom, shell).delta_alpha;
    const double via_energy =
        kSI.G_newton * m1 * (atom.transition_energy() / kC2) / (kSI.hbar * w * r);
    worst = std::max(worst, std::abs(via_masses - via_energy) / via_energy);
  }
  return {worst <= 1e-12, "100 atoms/shells, max relative difference = " + fmt("%.2e", worst)};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"scalar-ab"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  return sab_cli::cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
}

Outcome ac10() {
  const auto dir = fs::temp_directory_path() / "scalar_ab_acceptance";
  fs::create_directories(dir);
  std::vector<std::pair<std::string, std::string>> configs;
  for (const auto& p : sab_cli::preset_names()) configs.emplace_back(p, sab_cli::dump_preset(p));
  configs.emplace_back("sidebands", R"({"experiment": "ElectricSidebands",
      "parameters": {"alpha": 3.7, "modulation_frequency_MHz": 150, "base_energy_GHz": 8.5}})");
  configs.emplace_back("floquet", R"({"experiment": "FloquetDecompose",
      "parameters": {"samples_t_ns": [0, 1, 2.5, 10], "samples_u_GHz": [0, 0.4, -0.2, 0],
                     "base_energy_GHz": 5}})");
  configs.emplace_back("bulk", R"({"experiment": "BulkPhase",
      "parameters": {"drive_amplitude_uV": 1, "drive_frequency_MHz": 150, "t_end_ns": 20,
                     "cooper_pairs": 1e6, "electrons": 3, "ions": 2}})");
  int identical = 0;
  std::string failed;
  for (const auto& [name, text] : configs) {
    const auto cfg = dir / (name + ".config.json");
    std::ofstream(cfg, std::ios::binary | std::ios::trunc) << text;
    std::string bytes[2];
    bool ok = true;
    for (int k = 0; k < 2; ++k) {
      const auto out = dir / (name + ".run" + std::to_string(k));
      const std::string target = sab_cli::is_preset(name)
                                     ? name
                                     : std::string(sab_cli::experiment_name(
                                           sab_cli::parse_config(text).experiment));
      ok = ok && cli({target, "--config", cfg.string(), "--out", out.string()}) == 0;
      bytes[k] = slurp(out);
    }
    if (ok && !bytes[0].empty() && bytes[0] == bytes[1]) ++identical;
    else failed += " " + name;
  }
  const int total = static_cast<int>(configs.size());
  return {identical == total, std::to_string(identical) + "/" + std::to_string(total) +
                                  " configs byte-identical across runs" +
                                  (failed.empty() ? "" : ", differing:" + failed)};
}

struct Criterion {
  const char* id;
  const char* title;
  std::function<Outcome()> check;
  double time_limit_s;  // <= 0: none
};

}  // namespace

int main() {
  const double none = 0.0;
  const std::vector<Criterion> all = {
      {"AC1", "Jacobi-Anger matches the FFT route", ac1, 5.0},
      {"AC2", "spectra are normalised", ac2, none},
      {"AC3", "quasi-energy ladder spacing is hbar*omega exactly", ac3, none},
      {"AC4", "linear-limit circuit reproduces 0.1 cos(w_C t)", ac4, 1.0},
      {"AC5", "undriven nonlinear runs conserve energy", ac5, none},
      {"AC6", "fig3 phase stays nonzero after the drive ends", ac6, none},
      {"AC7", "fig4 landscape has >= 3 symmetric minima", ac7, none},
      {"AC8", "electric phase cancels, gravitational sidebands show", ac8, none},
      {"AC9", "delta_alpha via masses equals via dE/c^2", ac9, none},
      {"AC10", "identical configs give identical outputs", ac10, none},
  };
  int failures = 0;
  for (const auto& c : all) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome r;
    try {
      r = c.check();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool pass = r.pass;
    std::string timing = fmt("%.3f s", secs);
    if (c.time_limit_s > 0.0) {
      timing += fmt(" (limit %.0f s)", c.time_limit_s);
      if (secs >= c.time_limit_s) pass = false;
    }
    std::printf("%-4s %s  %s: %s [%s]\n", c.id, pass ? "PASS" : "FAIL", c.title, r.detail.c_str(),
                timing.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(all.size()) - failures, all.size());
  return failures == 0 ? 0 : 1;
}
