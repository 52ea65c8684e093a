#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "scalar_ab/ab_phase.hpp"
#include "scalar_ab/errors.hpp"
#include "scalar_ab/grav_redshift.hpp"
#include "scalar_ab/presets.hpp"
#include "scalar_ab/spectral.hpp"

using namespace scalar_ab;

namespace {

constexpr double kPi = std::numbers::pi;
const double kC2 = kSI.c_light * kSI.c_light;

double std_bessel_abs(int n, double x) {
  return std::abs(std::cyl_bessel_j(static_cast<double>(std::abs(n)), std::abs(x)));
}

// Shell with the breathing mass chosen for a given modulation depth.
MassShell shell_for_depth(const TwoLevelAtom& atom, double depth, double radius, double omega) {
  const double dm = atom.transition_energy() / kC2;
  const double m1 = depth * kSI.hbar * omega * radius / (kSI.G_newton * dm);
  return MassShell(10.0 * m1, m1, radius, omega);
}

}  // namespace

TEST_SUITE("grav") {

TEST_CASE("interior potential of a shell") {
  const auto earth = presets::earth_shell();
  CHECK(shell_potential(earth, 0.0) ==
        doctest::Approx(-kSI.G_newton * (5.972e24 + 1e19) / 6.371e6).epsilon(1e-15));
  CHECK(shell_potential(earth, 0.0) == doctest::Approx(-6.2563e7).epsilon(1e-4));
  // Half a modulation period later the breathing term has flipped.
  CHECK(shell_potential(earth, 0.5) ==
        doctest::Approx(-kSI.G_newton * (5.972e24 - 1e19) / 6.371e6).epsilon(1e-15));
  const MassShell empty(0.0, 0.0, 1.0, 1.0);
  CHECK(shell_potential(empty, 3.0) == 0.0);
}

TEST_CASE("rest mass in a potential") {
  const double e = 1.5e-10;
  CHECK(rest_mass_in_potential(e, 0.0) == e / kC2);
  const double phi = -1e-3 * kC2;
  CHECK(rest_mass_in_potential(e, phi) == doctest::Approx(e / kC2 / 1.001).epsilon(1e-15));
  CHECK_THROWS_AS(rest_mass_in_potential(e, -kC2), InvariantError);
  CHECK_THROWS_AS(rest_mass_in_potential(e, NAN), InvariantError);
}

TEST_CASE("static redshift at the earth's surface") {
  const auto atom = presets::earth_atom();
  const auto spec = transition_sideband_spectrum(atom, presets::earth_shell());
  CHECK(spec.local_frequency == doctest::Approx(1e15).epsilon(1e-15));
  const double phi = -kSI.G_newton * 5.972e24 / 6.371e6;
  CHECK(spec.carrier_frequency == doctest::Approx(1e15 / (1.0 - phi / kC2)).epsilon(1e-15));
  const double shift = 1.0 - spec.carrier_frequency / spec.local_frequency;
  CHECK(shift == doctest::Approx(6.961e-10).epsilon(1e-3));
  CHECK(shift > 0.0);
}

TEST_CASE("weak-field redshift is linear in the potential") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 50; ++rep) {
    // Large enough that 1 - f_obs / f is not dominated by rounding.
    const double phi = -std::pow(10.0, 10.0 + 4.0 * u(rng));
    const double f = 1e14 * (1.0 + u(rng));
    const double s1 = 1.0 - redshifted_frequency(f, phi) / f;
    const double s2 = 1.0 - redshifted_frequency(f, 2.0 * phi) / f;
    // Doubling the potential doubles the shift up to O(phi/c^2).
    CHECK(std::abs(s2 / s1 - 2.0) <= 4.0 * std::abs(phi) / kC2 + 1e-7);
  }
  CHECK_THROWS_AS(redshifted_frequency(1.0, 2.0 * kC2), InvariantError);
}

TEST_CASE("modulation indices") {
  const auto atom = presets::earth_atom();
  const auto earth = presets::earth_shell();
  const auto idx = modulation_indices(atom, earth);
  const double k = kSI.G_newton * 1e19 / (kSI.hbar * 2 * kPi * 6.371e6);
  CHECK(idx.alpha_i == doctest::Approx(k * atom.rest_mass_i()).epsilon(1e-14));
  CHECK(idx.alpha_f == doctest::Approx(k * atom.rest_mass_f()).epsilon(1e-14));
  // The depth comes from the transition energy alone.
  CHECK(idx.delta_alpha == doctest::Approx(k * kSI.h * 1e15 / kC2).epsilon(1e-6));
  CHECK(idx.delta_alpha == doctest::Approx(1.1656).epsilon(1e-4));

  const MassShell rigid(5.972e24, 0.0, 6.371e6, 2 * kPi);
  CHECK(modulation_indices(atom, rigid).delta_alpha == 0.0);
  CHECK_THROWS_AS(modulation_indices(atom, MassShell(1.0, 0.5, 1.0, 0.0)), InvariantError);
}

TEST_CASE("one eV transition seen along two paths") {
  // Integrate each level's phase separately and subtract; the oscillating
  // part of the difference has amplitude delta_alpha.
  const double ev = kSI.e_charge;
  const auto atom = TwoLevelAtom::from_energies(0.0, ev);
  const MassShell shell(1e27, 1e26, 1e7, 2 * kPi * 10.0);
  const auto idx = modulation_indices(atom, shell);
  const auto grid = uniform_grid(0.0, 0.1, 400);
  const double dc = -kSI.G_newton * shell.m0() / shell.radius();
  auto ac = [&](double t) { return shell_potential(shell, t) - dc; };
  QuadratureOptions q;
  q.rel_tol = 1e-13;
  const auto pi = accumulate_grav_phase([&](double) { return atom.rest_mass_i(); }, ac, grid, q);
  const auto pf = accumulate_grav_phase([&](double) { return atom.rest_mass_f(); }, ac, grid, q);
  double amp = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) amp = std::max(amp, std::abs(pf.phase()[k] - pi.phase()[k]));
  CHECK(amp == doctest::Approx(idx.delta_alpha).epsilon(1e-9));
}

TEST_CASE("equal rest masses give no sidebands") {
  // Masses given equal; the 1e-57 kg gap is far below their resolution.
  const TwoLevelAtom atom(0.0, 1e-40, 1e-26, 1e-26);
  REQUIRE(atom.rest_mass_gap() == 0.0);
  const auto idx = modulation_indices(atom, presets::earth_shell());
  CHECK(idx.delta_alpha == 0.0);
  const auto spec = transition_sideband_spectrum(atom, presets::earth_shell());
  CHECK(spec.sideband_lines.size() == 1);
  const auto centre = std::find_if(spec.sideband_lines.begin(), spec.sideband_lines.end(),
                                   [](const SidebandLine& l) { return l.n == 0; });
  REQUIRE(centre != spec.sideband_lines.end());
  CHECK(centre->relative_amplitude == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("rigid shell gives a single line") {
  const auto atom = presets::earth_atom();
  const auto spec = transition_sideband_spectrum(atom, MassShell(5.972e24, 0.0, 6.371e6, 2 * kPi));
  CHECK(spec.delta_alpha == 0.0);
  REQUIRE(spec.sideband_lines.size() == 1);
  CHECK(spec.sideband_lines[0].n == 0);
  CHECK(spec.sideband_lines[0].relative_amplitude == 1.0);
  CHECK(spec.sideband_lines[0].frequency == spec.carrier_frequency);
}

TEST_CASE("a static shell shifts the line and nothing else") {
  const auto atom = presets::earth_atom();
  const MassShell dc(5.972e24, 0.0, 6.371e6, 0.0);
  const auto spec = transition_sideband_spectrum(atom, dc);
  REQUIRE(spec.sideband_lines.size() == 1);
  CHECK(spec.sideband_lines[0].frequency == spec.carrier_frequency);
  CHECK(spec.carrier_frequency < spec.local_frequency);
}

TEST_CASE("depth five spectrum") {
  const auto atom = presets::earth_atom();
  const auto shell = shell_for_depth(atom, 5.0, 1e8, 2 * kPi * 50.0);
  const auto spec = transition_sideband_spectrum(atom, shell);
  CHECK(spec.delta_alpha == doctest::Approx(5.0).epsilon(1e-12));
  int strong = 0;
  const SidebandLine* best = &spec.sideband_lines.front();
  for (const auto& l : spec.sideband_lines) {
    if (l.relative_amplitude > 0.01) ++strong;
    if (l.relative_amplitude > best->relative_amplitude) best = &l;
    CHECK(l.relative_amplitude == doctest::Approx(std_bessel_abs(l.n, 5.0)).epsilon(1e-10).scale(1e-3));
    CHECK(l.frequency == doctest::Approx(spec.carrier_frequency + l.n * 50.0).epsilon(1e-15));
  }
  CHECK(strong >= 9);
  CHECK((std::abs(best->n) == 4 || std::abs(best->n) == 5));
  for (std::size_t k = 1; k < spec.sideband_lines.size(); ++k)
    CHECK(spec.sideband_lines[k].n > spec.sideband_lines[k - 1].n);
}

TEST_CASE("a microwave gap survives next to a heavy ground mass") {
  // 1 GHz on a caesium-mass atom: dm / m ~ 3e-17, below one ulp of m.
  const double m = 2.2e-25;
  const double de = kSI.h * 1e9;
  const auto atom = TwoLevelAtom::from_ground_mass(m, 0.0, de);
  CHECK(atom.rest_mass_f() == m);
  CHECK(atom.rest_mass_gap() == doctest::Approx(de / kC2).epsilon(1e-15));
  const MassShell shell(1e30, 1e29, 1e9, 2 * kPi * 0.01);
  const double want = kSI.G_newton * 1e29 * (de / kC2) / (kSI.hbar * 2 * kPi * 0.01 * 1e9);
  CHECK(modulation_indices(atom, shell).delta_alpha == doctest::Approx(want).epsilon(1e-14));
  CHECK_THROWS_AS(TwoLevelAtom(0.0, de, m, m, 0.0, m), InvariantError);
}

TEST_CASE("depth scales with the shell and the transition") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  const auto atom = presets::earth_atom();
  const MassShell base(1e25, 1e22, 1e7, 2 * kPi * 3.0);
  const double d0 = modulation_indices(atom, base).delta_alpha;
  for (int rep = 0; rep < 30; ++rep) {
    const double a = u(rng), b = u(rng), c = u(rng);
    const MassShell s(1e25, 1e22 * a, 1e7 * b, 2 * kPi * 3.0 * c);
    CHECK(modulation_indices(atom, s).delta_alpha == doctest::Approx(d0 * a / (b * c)).epsilon(1e-12));
    const auto heavier = TwoLevelAtom::from_ground_mass(atom.rest_mass_i(), 0.0, atom.energy_f() * a);
    CHECK(modulation_indices(heavier, base).delta_alpha == doctest::Approx(d0 * a).epsilon(1e-6));
  }
}

TEST_CASE("sidebands ignore the atom's charge") {
  const auto n = TwoLevelAtom::from_energies(1e-10, 1e-10 + 1e-18, 0.0);
  const auto ion = TwoLevelAtom::from_energies(1e-10, 1e-10 + 1e-18, kSI.e_charge);
  const auto shell = presets::supernova_shell();
  const auto a = transition_sideband_spectrum(n, shell);
  const auto b = transition_sideband_spectrum(ion, shell);
  CHECK(a.delta_alpha == b.delta_alpha);
  REQUIRE(a.sideband_lines.size() == b.sideband_lines.size());
  for (std::size_t k = 0; k < a.sideband_lines.size(); ++k)
    CHECK(a.sideband_lines[k].relative_amplitude == b.sideband_lines[k].relative_amplitude);
}

TEST_CASE("common electric phase leaves the rate unchanged") {
  const auto grid = uniform_grid(0.0, 1e-6, 1000);
  const auto drive = DriveWaveform::sinusoid(1e-3, 2 * kPi * 5e6, 0.2, 1e-4);
  const auto h = accumulate_electric_phase(kSI.e_charge, drive, grid);
  CHECK(ion_cancellation_check(h, 0.42) == 0.42);
  const PhaseHistory flat(grid, std::vector<double>(grid.size(), 0.0));
  CHECK(ion_cancellation_check(flat, 0.42) == 0.42);
  // Phases of a million radians do not disturb the cancellation.
  std::vector<double> big(grid.size(), 0.0);
  for (std::size_t k = 1; k < grid.size(); ++k) big[k] = 1e6 * std::sin(2 * kPi * k / 97.0) + 1e6;
  const double r = ion_cancellation_check(PhaseHistory(grid, big), 0.42);
  CHECK(std::abs(r - 0.42) <= std::nextafter(0.42, 1.0) - 0.42);
  CHECK_THROWS_AS(ion_cancellation_check(flat, -1.0), InvariantError);
}

TEST_CASE("expanding shell potential") {
  const double mass = 2e30, r0 = 1e9, v = 1e7;
  std::vector<Sample> radius;
  for (int k = 0; k <= 2000; ++k) radius.push_back({k * 1e-2, r0 + v * k * 1e-2});
  const auto pot = exploding_shell_potential(mass, radius);
  REQUIRE(pot.size() == radius.size());
  CHECK(pot.front().value == doctest::Approx(-kSI.G_newton * mass / r0).epsilon(1e-15));
  for (std::size_t k = 1; k < pot.size(); ++k) CHECK(pot[k].value > pot[k - 1].value);

  // Phase of a unit mass: integral of -G M / (r0 + v t) is -(G M / v) ln(r(t) / r0).
  const std::vector<Sample> m = {{0.0, 1.0}, {20.0, 1.0}};
  const auto grid = uniform_grid(0.0, 20.0, 20);
  const auto h = accumulate_grav_phase(m, pot, grid);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double want = -kSI.G_newton * mass / v * std::log((r0 + v * grid[k]) / r0) / kSI.hbar;
    CHECK(h.phase()[k] == doctest::Approx(want).epsilon(1e-6));
  }
  CHECK_THROWS_AS(exploding_shell_potential(mass, {{0.0, 0.0}}), InvariantError);
  CHECK_THROWS_AS(exploding_shell_potential(-1.0, radius), InvariantError);
}

}  // TEST_SUITE
