#pragma once

// Embedded Runge-Kutta steppers for small fixed-size systems. Internal.

#include <array>
#include <cmath>
#include <cstddef>

namespace scalar_ab::detail {

template <std::size_t N>
using State = std::array<double, N>;

// Dormand-Prince 5(4) tableau with the FSAL property and Hairer's
// fourth-order continuous extension.
namespace dp {
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                        a75 = -2187.0 / 6784, a76 = 11.0 / 84;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
inline constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                        d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                        d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
}  // namespace dp

template <std::size_t N>
struct DenseStep {
  double t0 = 0.0, h = 0.0;
  std::array<State<N>, 5> r{};

  State<N> at(double t) const {
    const double th = (t - t0) / h, th1 = 1.0 - th;
    State<N> y;
    for (std::size_t i = 0; i < N; ++i)
      y[i] = r[0][i] + th * (r[1][i] + th1 * (r[2][i] + th * (r[3][i] + th1 * r[4][i])));
    return y;
  }
};

struct TrialResult {
  double error_norm;
  bool finite;
};

// One Dormand-Prince trial step from (t, y) with derivative k1 = f(t, y).
// Fills y_new, k7 = f(t + h, y_new) and the dense-output coefficients.
template <std::size_t N, class Rhs>
TrialResult dopri_trial(const Rhs& f, double t, const State<N>& y, const State<N>& k1, double h,
                        double rtol, double atol, State<N>& y_new, State<N>& k7,
                        DenseStep<N>& dense) {
  using namespace dp;
  State<N> tmp, k2, k3, k4, k5, k6;
  for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * a21 * k1[i];
  k2 = f(t + c2 * h, tmp);
  for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
  k3 = f(t + c3 * h, tmp);
  for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
  k4 = f(t + c4 * h, tmp);
  for (std::size_t i = 0; i < N; ++i)
    tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
  k5 = f(t + c5 * h, tmp);
  for (std::size_t i = 0; i < N; ++i)
    tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
  k6 = f(t + h, tmp);
  for (std::size_t i = 0; i < N; ++i)
    y_new[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
  k7 = f(t + h, y_new);

  double sum = 0.0;
  bool finite = true;
  for (std::size_t i = 0; i < N; ++i) {
    const double e =
        h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    const double sk = atol + rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
    sum += (e / sk) * (e / sk);
    finite = finite && std::isfinite(y_new[i]) && std::isfinite(k7[i]);
  }

  dense.t0 = t;
  dense.h = h;
  for (std::size_t i = 0; i < N; ++i) {
    const double ydiff = y_new[i] - y[i];
    const double bspl = h * k1[i] - ydiff;
    dense.r[0][i] = y[i];
    dense.r[1][i] = ydiff;
    dense.r[2][i] = bspl;
    dense.r[3][i] = ydiff - h * k7[i] - bspl;
    dense.r[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                         d7 * k7[i]);
  }
  return {std::sqrt(sum / static_cast<double>(N)), finite};
}

// Classical fourth-order Runge-Kutta step.
template <std::size_t N, class Rhs>
State<N> rk4_step(const Rhs& f, double t, const State<N>& y, const State<N>& k1, double h) {
  State<N> tmp;
  for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
  const State<N> k2 = f(t + 0.5 * h, tmp);
  for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
  const State<N> k3 = f(t + 0.5 * h, tmp);
  for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * k3[i];
  const State<N> k4 = f(t + h, tmp);
  State<N> out;
  for (std::size_t i = 0; i < N; ++i)
    out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

// Cubic Hermite interpolation between two states with known derivatives.
template <std::size_t N>
State<N> hermite(double t0, double h, const State<N>& y0, const State<N>& f0,
                 const State<N>& y1, const State<N>& f1, double t) {
  const double s = (t - t0) / h;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
  State<N> y;
  for (std::size_t i = 0; i < N; ++i)
    y[i] = h00 * y0[i] + h10 * h * f0[i] + h01 * y1[i] + h11 * h * f1[i];
  return y;
}

}  // namespace scalar_ab::detail
