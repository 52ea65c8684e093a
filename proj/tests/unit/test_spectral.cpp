#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstring>
#include <numbers>
#include <random>

#include "scalar_ab/ab_phase.hpp"
#include "scalar_ab/errors.hpp"
#include "scalar_ab/spectral.hpp"

using namespace scalar_ab;

namespace {

constexpr double kPi = std::numbers::pi;
using cplx = std::complex<double>;

// Ascending series in long double; fine for |x| up to about 10.
double bessel_series(int n, double x) {
  const int sign = n < 0 && (n % 2) ? -1 : 1;
  n = std::abs(n);
  long double term = 1.0L;
  for (int k = 1; k <= n; ++k) term *= static_cast<long double>(x) / 2.0L / k;
  long double sum = term;
  const long double q = -static_cast<long double>(x) * x / 4.0L;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<long double>(k) * (k + n));
    sum += term;
    if (std::abs(term) < 1e-30L * std::abs(sum)) break;
  }
  return sign * static_cast<double>(sum);
}

double std_bessel(int n, double x) {
  const double v = std::cyl_bessel_j(static_cast<double>(std::abs(n)), std::abs(x));
  const bool flip = ((n < 0) != (x < 0)) && (std::abs(n) % 2 == 1);
  return flip ? -v : v;
}

// Phase history of U(t) over `periods` whole periods on a uniform grid.
PhaseHistory phase_of(const TimeFunction& u, double omega, int periods, std::size_t per_period) {
  const double t1 = periods * 2 * kPi / omega;
  QuadratureOptions q;
  q.rel_tol = 1e-13;
  q.abs_tol = 1e-300;
  return accumulate_phase(u, 1.0 / kSI.hbar, uniform_grid(0.0, t1, per_period * periods), {}, q);
}

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("bessel against the ascending series") {
  for (double x : {1e-5, 0.003, 0.2, 1.0, 2.4048, 5.0, 7.7, -3.3}) {
    for (int n = -15; n <= 15; ++n) {
      const double want = bessel_series(n, x);
      CHECK(bessel_j(n, x) == doctest::Approx(want).epsilon(1e-13).scale(1e-3));
    }
  }
}

TEST_CASE("bessel against the standard library") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int rep = 0; rep < 300; ++rep) {
    const double x = u(rng) * std::pow(10.0, 3.0 * std::abs(u(rng)));
    const int n = static_cast<int>(u(rng) * (std::abs(x) + 30));
    CHECK(bessel_j(n, x) == doctest::Approx(std_bessel(n, x)).epsilon(1e-10).scale(1e-2));
  }
  for (double x : {5e4, 3e5, 9.9e5})
    for (int n : {0, 1, 17, 400})
      CHECK(bessel_j(n, x) == doctest::Approx(std_bessel(n, x)).epsilon(1e-8).scale(1e-3));
}

TEST_CASE("bessel symmetries and special values") {
  CHECK(bessel_j(0, 0.0) == 1.0);
  CHECK(bessel_j(3, 0.0) == 0.0);
  for (double x : {0.7, 4.0, 31.0})
    for (int n = 0; n < 12; ++n) {
      CHECK(bessel_j(-n, x) == doctest::Approx((n % 2 ? -1.0 : 1.0) * bessel_j(n, x)).scale(1e-3));
      CHECK(bessel_j(n, -x) == doctest::Approx((n % 2 ? -1.0 : 1.0) * bessel_j(n, x)).scale(1e-3));
    }
  // First zero of J_0.
  CHECK(std::abs(bessel_j(0, 2.404825557695773)) < 1e-15);
  CHECK_THROWS_AS(bessel_j(0, 1e6), InvariantError);
  CHECK_THROWS_AS(bessel_j(0, NAN), InvariantError);
}

TEST_CASE("jacobi-anger weights") {
  const auto s0 = jacobi_anger_coeffs(0.0, 10);
  CHECK(s0.coefficient(0) == cplx(1.0, 0.0));
  for (int n = 1; n <= 10; ++n) CHECK(s0.coefficient(n) == cplx(0.0, 0.0));

  const auto s5 = jacobi_anger_coeffs(5.0, default_truncation(5.0));
  int dominant = 0;
  for (const auto& [n, c] : s5.coefficients())
    if (std::abs(c) > std::abs(s5.coefficient(dominant))) dominant = n;
  CHECK((std::abs(dominant) == 4 || std::abs(dominant) == 5));
  for (int n = 0; n <= 20; ++n)
    CHECK(s5.coefficient(-n) == (n % 2 ? -1.0 : 1.0) * s5.coefficient(n));
}

TEST_CASE("truncation bounds keep the spectrum normalised") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 60; ++rep) {
    const double alpha = std::pow(10.0, -3.0 + 6.0 * u(rng)) * (rep % 2 ? -1 : 1);
    const int nmin = minimum_truncation(alpha);
    CHECK(default_truncation(alpha) >= nmin);
    const auto s = jacobi_anger_coeffs(alpha, nmin);
    CHECK(std::abs(s.norm() - 1.0) <= kNormalizationTolerance);
    CHECK_THROWS_WITH_AS(jacobi_anger_coeffs(alpha, nmin - 1), doctest::Contains("too small"),
                         InvariantError);
  }
}

TEST_CASE("quasi-energy ladder") {
  const double omega = 2 * kPi * 1e9;
  const auto lad = quasi_energy_ladder(1e-20, omega, -3, 3);
  REQUIRE(lad.size() == 7);
  CHECK(lad[0].n == -3);
  for (const auto& l : lad)
    CHECK(l.energy == doctest::Approx(1e-20 + l.n * kSI.hbar * omega).epsilon(1e-15));
  CHECK_THROWS_AS(quasi_energy_ladder(0.0, 1.0, 2, 1), InvariantError);
  CHECK_THROWS_AS(ladder_spacing(lad[0], lad[2]), InvariantError);
}

TEST_CASE("ladder spacing is exactly hbar omega") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 200; ++rep) {
    const double omega = std::pow(10.0, 18.0 * u(rng));
    const double base = (u(rng) - 0.5) * std::pow(10.0, -30.0 + 20.0 * u(rng));
    const int lo = static_cast<int>(-1000 * u(rng));
    const auto lad = quasi_energy_ladder(base, omega, lo, lo + 50);
    const double quantum = kSI.hbar * omega;
    for (std::size_t k = 0; k + 1 < lad.size(); ++k) {
      const double d = ladder_spacing(lad[k], lad[k + 1]);
      CHECK(std::memcmp(&d, &quantum, sizeof d) == 0);
    }
  }
}

TEST_CASE("floquet decomposition of a sinusoid") {
  const double omega = 2 * kPi * 1e8;
  for (double alpha : {0.0, 0.3, 2.0, 12.5}) {
    for (double p0 : {0.0, 0.9}) {
      const auto w = DriveWaveform::sinusoid(alpha * kSI.hbar * omega, omega, p0);
      const auto d = floquet_decompose(w, 1e-24);
      CHECK(d.residual < 1e-8);
      CHECK(d.quasi_energy == doctest::Approx(1e-24));
      CHECK(d.omega == omega);
      for (int n = -d.truncation_n; n <= d.truncation_n; ++n) {
        // exp(-i alpha (sin(wt + p) - sin p)) = e^{i alpha sin p} sum J_n e^{-i n (wt + p)}
        const cplx want = std_bessel(n, alpha) * std::polar(1.0, alpha * std::sin(p0) - n * p0);
        CHECK(std::abs(d.coefficients.at(n) - want) < 1e-12);
      }
      CHECK(d.spectrum().norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("floquet decomposition of a constant") {
  const auto w = DriveWaveform::sinusoid(0.0, 3.0, 0.0, 2e-22);
  const auto d = floquet_decompose(w, 1e-22);
  CHECK(d.quasi_energy == doctest::Approx(3e-22));
  CHECK(d.mean_potential == doctest::Approx(2e-22));
  CHECK(std::abs(d.coefficients.at(0) - 1.0) < 1e-15);
  for (const auto& [n, c] : d.coefficients)
    if (n != 0) CHECK(std::abs(c) < 1e-15);
}

TEST_CASE("floquet decomposition of a sampled wave against the fft route") {
  // Trapezoidal pulse train with a nonzero mean.
  const double period = 1e-8, omega = 2 * kPi / period;
  const double u0 = 3.0 * kSI.hbar * omega;
  const std::vector<Sample> s = {{0.0, 0.0},
                                 {0.05 * period, u0},
                                 {0.45 * period, u0},
                                 {0.5 * period, -0.5 * u0},
                                 {0.9 * period, -0.5 * u0},
                                 {period, 0.0}};
  const auto w = DriveWaveform::sampled(s);
  const auto d = floquet_decompose(w, 0.0);
  CHECK(d.mean_potential == doctest::Approx(w.mean()));
  CHECK(d.residual < 1e-8);
  CHECK(d.spectrum().norm() == doctest::Approx(1.0).epsilon(1e-9));

  const double mean = w.mean();
  const auto hist = phase_of([&](double t) { return w.value(t) - mean; }, omega, 1, 1 << 16);
  // The kinks make the weights decay slowly; 128 harmonics already hold
  // all but 1e-9 of the norm.
  const int n_max = 128;
  CHECK(d.truncation_n >= n_max);
  const auto ref = fm_spectrum_via_fft(hist, omega, n_max);
  for (int n = -n_max; n <= n_max; ++n) CHECK(std::abs(d.coefficients.at(n) - ref.coefficient(n)) < 1e-8);
}

TEST_CASE("floquet preconditions") {
  const auto open = DriveWaveform::sampled({{0.0, 0.0}, {1.0, 1.0}, {2.0, 0.0}}, std::nullopt, false);
  CHECK_THROWS_WITH_AS(floquet_decompose(open, 0.0), doctest::Contains("periodic"), InvariantError);
  const double omega = 1e9;
  const auto sharp = DriveWaveform::sampled(
      {{0.0, 0.0}, {1e-12, 1e-24}, {3e-9, 1e-24}, {3.001e-9, -1e-24}, {2 * kPi / omega, 0.0}});
  FloquetOptions tight;
  tight.max_truncation = 4;
  CHECK_THROWS_WITH_AS(floquet_decompose(sharp, 0.0, 0, tight), doctest::Contains("residual"),
                       NumericError);
}

TEST_CASE("fft route on a flat phase") {
  const double omega = 5.0;
  const auto hist = phase_of([](double) { return 0.0; }, omega, 2, 64);
  const auto s = fm_spectrum_via_fft(hist, omega, 3);
  CHECK(s.coefficient(0) == cplx(1.0, 0.0));
  for (int n = 1; n <= 3; ++n) CHECK(std::abs(s.coefficient(n)) == 0.0);
}

TEST_CASE("fft route reproduces J_n(1)") {
  const double omega = 2 * kPi * 1e6;
  const double u0 = kSI.hbar * omega;
  const auto hist = phase_of([&](double t) { return u0 * std::cos(omega * t); }, omega, 1, 1 << 12);
  const auto s = fm_spectrum_via_fft(hist, omega, 12);
  for (int n = -12; n <= 12; ++n) CHECK(std::abs(s.coefficient(n) - std_bessel(n, 1.0)) < 1e-10);
}

TEST_CASE("two-tone modulation is a convolution of bessel ladders") {
  const double omega = 2 * kPi * 1e7;
  const double a1 = 2.2, a2 = 0.8;  // U2 = 2 hbar omega a2 gives depth a2 at 2 omega
  const double u1 = a1 * kSI.hbar * omega, u2 = 2 * a2 * kSI.hbar * omega;
  const auto hist = phase_of([&](double t) { return u1 * std::cos(omega * t) + u2 * std::cos(2 * omega * t); },
                             omega, 2, 1 << 12);
  const auto s = fm_spectrum_via_fft(hist, omega, 20);
  for (int n = -20; n <= 20; ++n) {
    double want = 0.0;
    for (int b = -30; b <= 30; ++b) want += std_bessel(n - 2 * b, a1) * std_bessel(b, a2);
    CHECK(std::abs(s.coefficient(n) - want) < 1e-10);
  }
}

TEST_CASE("fft route preconditions") {
  const double omega = 1.0;
  const auto good = phase_of([](double) { return 0.0; }, omega, 1, 64);
  CHECK_THROWS_WITH_AS(fm_spectrum_via_fft(good, omega, 5), doctest::Contains("16 * truncation_n"),
                       InvariantError);
  CHECK_THROWS_WITH_AS(fm_spectrum_via_fft(good, 1.5 * omega, 1), doctest::Contains("integer number"),
                       InvariantError);
  std::vector<double> t = good.times();
  t[5] += 0.3 * (t[6] - t[5]);
  const PhaseHistory skewed(t, std::vector<double>(t.size(), 0.0));
  CHECK_THROWS_WITH_AS(fm_spectrum_via_fft(skewed, omega, 1), doctest::Contains("uniform"),
                       InvariantError);
  CHECK_THROWS_AS(fm_spectrum_via_fft(good, 0.0, 1), InvariantError);
}

}  // TEST_SUITE
