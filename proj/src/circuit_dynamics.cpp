#include "scalar_ab/circuit_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "dopri5.hpp"
#include "scalar_ab/errors.hpp"

namespace scalar_ab {

using detail::require;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double two_e_over_hbar() { return 2.0 * kSI.e_charge / kSI.hbar; }

std::string at_time(double t) {
  std::ostringstream os;
  os.precision(10);
  os << " at t = " << t << " s";
  return os.str();
}

}  // namespace

double EomParams::linear_frequency() const {
  return std::sqrt(omega_c * omega_c + nonlinear_coeff);
}

double EomParams::forcing(double t) const {
  if (coupling == 0.0 || drive_coeff == 0.0) return 0.0;
  return coupling * drive.derivative(t);
}

double EomParams::energy(double phi, double phi_dot) const {
  // 1 - cos(phi) written as 2 sin^2(phi/2) keeps precision for small phi.
  const double s = std::sin(0.5 * phi);
  return 0.5 * phi_dot * phi_dot + 0.5 * omega_c * omega_c * phi * phi +
         nonlinear_coeff * 2.0 * s * s;
}

EomParams build_eom(const CircuitParams& params, const DriveWaveform& drive) {
  require(drive.has_derivative(),
          "build_eom: the drive enters through dV/dt, but this sampled waveform has no "
          "derivative samples; pass derivative samples (dV/dt at the same instants) or use a "
          "sinusoid");
  EomParams eom;
  eom.omega_c = std::isinf(params.inductance())
                    ? 0.0
                    : 1.0 / std::sqrt(params.inductance() * params.c_prime());
  const double k = two_e_over_hbar();
  eom.nonlinear_coeff = k * k * params.e_josephson() / params.c_sigma();
  eom.coupling = k * params.c_gate() / params.c_sigma();
  eom.drive_coeff = eom.coupling * drive.omega() * drive.amplitude();
  eom.drive = drive;
  return eom;
}

// ---------------------------------------------------------------------------

DriveEnvelope DriveEnvelope::window(double on, double off, double drive_period,
                                    EnvelopeShape shape, double ramp_periods) {
  require(off > on, "DriveEnvelope: off must be later than on");
  require(drive_period > 0.0 && ramp_periods >= 0.0,
          "DriveEnvelope: drive period must be > 0 and ramp length >= 0");
  DriveEnvelope e;
  e.on = on;
  e.off = off;
  e.shape = shape;
  e.ramp = shape == EnvelopeShape::Instantaneous ? 0.0 : ramp_periods * drive_period;
  require(2.0 * e.ramp <= off - on, "DriveEnvelope: ramps longer than the drive window");
  return e;
}

double DriveEnvelope::operator()(double t) const {
  if (t < on || t >= off) return 0.0;
  if (shape == EnvelopeShape::Instantaneous || ramp <= 0.0) return 1.0;
  if (t < on + ramp) return 0.5 * (1.0 - std::cos(std::numbers::pi * (t - on) / ramp));
  if (t > off - ramp) return 0.5 * (1.0 - std::cos(std::numbers::pi * (off - t) / ramp));
  return 1.0;
}

std::vector<double> DriveEnvelope::breakpoints() const {
  std::vector<double> b;
  auto add = [&](double t) {
    if (std::isfinite(t)) b.push_back(t);
  };
  add(on);
  add(off);
  if (shape == EnvelopeShape::RaisedCosine && ramp > 0.0) {
    add(on + ramp);
    add(off - ramp);
  }
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

// ---------------------------------------------------------------------------

namespace {

using State2 = detail::State<2>;

// Envelope evaluated on the smooth piece that contains `ref`, extended to
// `t`. Keeps the right-hand side continuous up to a segment's end point.
double envelope_piece(const DriveEnvelope& e, double ref, double t) {
  if (ref < e.on || ref >= e.off) return 0.0;
  if (e.shape == EnvelopeShape::Instantaneous || e.ramp <= 0.0) return 1.0;
  if (ref < e.on + e.ramp) return 0.5 * (1.0 - std::cos(std::numbers::pi * (t - e.on) / e.ramp));
  if (ref > e.off - e.ramp) return 0.5 * (1.0 - std::cos(std::numbers::pi * (e.off - t) / e.ramp));
  return 1.0;
}

class TrajectoryRecorder {
 public:
  TrajectoryRecorder(double t0, double t1, std::size_t samples) : samples_(samples) {
    if (samples_ == 1) samples_ = 2;
    if (samples_ > 0) {
      out_times_.resize(samples_);
      for (std::size_t k = 0; k < samples_; ++k)
        out_times_[k] = t0 + (t1 - t0) * static_cast<double>(k) / static_cast<double>(samples_ - 1);
      out_times_.back() = t1;
    }
  }

  bool every_step() const { return samples_ == 0; }

  void push(double t, const State2& y) {
    times.push_back(t);
    phi.push_back(y[0]);
    phi_dot.push_back(y[1]);
  }

  // Emits all pending output instants in (.., t_end]; `eval` interpolates.
  template <class Eval>
  void emit_until(double t_end, const State2& y_end, const Eval& eval) {
    while (next_ < out_times_.size() && out_times_[next_] <= t_end) {
      const double t = out_times_[next_];
      push(t, t == t_end ? y_end : eval(t));
      ++next_;
    }
  }

  void start(double t0, const State2& y0) {
    if (every_step()) {
      push(t0, y0);
    } else {
      push(t0, y0);
      next_ = 1;
    }
  }

  std::vector<double> times, phi, phi_dot;

 private:
  std::size_t samples_;
  std::vector<double> out_times_;
  std::size_t next_ = 0;
};

double norm_scaled(const State2& v, const State2& y, double rtol, double atol) {
  double s = 0.0;
  for (std::size_t i = 0; i < 2; ++i) {
    const double sk = atol + rtol * std::abs(y[i]);
    s += (v[i] / sk) * (v[i] / sk);
  }
  return std::sqrt(s / 2.0);
}

template <class Rhs>
double initial_step(const Rhs& f, double t, const State2& y, const State2& f0, double span,
                    double rtol, double atol) {
  const double d0 = norm_scaled(y, y, rtol, atol);
  const double d1 = norm_scaled(f0, y, rtol, atol);
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 * span : 0.01 * d0 / d1;
  h0 = std::min(h0, span);
  State2 y1{y[0] + h0 * f0[0], y[1] + h0 * f0[1]};
  const State2 f1 = f(t + h0, y1);
  const State2 df{f1[0] - f0[0], f1[1] - f0[1]};
  const double d2 = norm_scaled(df, y, rtol, atol) / h0;
  const double dm = std::max(d1, d2);
  const double h1 = dm <= 1e-15 ? std::max(1e-6 * span, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
  return std::min({100.0 * h0, h1, span});
}

}  // namespace

Trajectory integrate_trajectory(const EomParams& eom, double phi0, double phi_dot0, double t0,
                                double t1, const DriveEnvelope& envelope,
                                const IntegratorOptions& opt) {
  require(std::isfinite(t0) && std::isfinite(t1) && t1 > t0,
          "integrate_trajectory: t_span must be finite and increasing");
  require(std::isfinite(phi0) && std::isfinite(phi_dot0),
          "integrate_trajectory: initial conditions must be finite");
  require(opt.rel_tol > 0.0 && opt.abs_tol > 0.0,
          "integrate_trajectory: tolerances must be positive");
  if (opt.method == StepMethod::RungeKutta4)
    require(opt.fixed_step > 0.0, "integrate_trajectory: RungeKutta4 needs fixed_step > 0");

  const double wc2 = eom.omega_c * eom.omega_c;
  const double nl = eom.nonlinear_coeff;
  double piece_ref = t0;
  auto rhs = [&](double t, const State2& y) -> State2 {
    const double env = envelope_piece(envelope, piece_ref, t);
    const double drive = env == 0.0 ? 0.0 : env * eom.forcing(t);
    return {y[1], -wc2 * y[0] - nl * std::sin(y[0]) - drive};
  };

  std::vector<double> cuts{t0};
  for (double b : envelope.breakpoints())
    if (b > t0 && b < t1) cuts.push_back(b);
  cuts.push_back(t1);

  TrajectoryRecorder rec(t0, t1, opt.output_samples);
  State2 y{phi0, phi_dot0};
  rec.start(t0, y);

  const double span = t1 - t0;
  double t = t0;
  State2 k1 = rhs(t, y);
  double h = opt.initial_step > 0.0 ? opt.initial_step
                                    : initial_step(rhs, t, y, k1, span, opt.rel_tol, opt.abs_tol);
  long accepted = 0, rejected = 0;

  for (std::size_t seg = 1; seg < cuts.size(); ++seg) {
    const double b = cuts[seg];
    piece_ref = 0.5 * (cuts[seg - 1] + b);
    // The right-hand side may jump at a segment boundary.
    k1 = rhs(t, y);
    while (t < b) {
      if (accepted + rejected >= opt.max_steps)
        throw NumericError("integrate_trajectory: step budget exhausted" + at_time(t));
      const double h_min = 16.0 * std::numeric_limits<double>::epsilon() *
                           std::max(std::abs(t), std::abs(t1));
      const bool last = opt.method == StepMethod::RungeKutta4
                            ? b - t <= opt.fixed_step * (1.0 + 1e-9)
                            : t + h >= b;
      const double step = opt.method == StepMethod::RungeKutta4
                              ? (last ? b - t : opt.fixed_step)
                              : (last ? b - t : h);

      if (opt.method == StepMethod::RungeKutta4) {
        const State2 y_new = detail::rk4_step(rhs, t, y, k1, step);
        if (!std::isfinite(y_new[0]) || !std::isfinite(y_new[1]))
          throw NumericError("integrate_trajectory: NaN or overflow detected" + at_time(t));
        const double t_new = last ? b : t + step;
        const State2 k_new = rhs(t_new, y_new);
        if (rec.every_step()) {
          rec.push(t_new, y_new);
        } else {
          rec.emit_until(t_new, y_new, [&](double tq) {
            return detail::hermite(t, t_new - t, y, k1, y_new, k_new, tq);
          });
        }
        t = t_new;
        y = y_new;
        k1 = k_new;
        ++accepted;
        continue;
      }

      State2 y_new, k7;
      detail::DenseStep<2> dense;
      const auto trial =
          detail::dopri_trial(rhs, t, y, k1, step, opt.rel_tol, opt.abs_tol, y_new, k7, dense);
      if (!trial.finite || std::isnan(trial.error_norm))
        throw NumericError("integrate_trajectory: NaN or overflow detected" + at_time(t));

      const double err = trial.error_norm;
      if (err <= 1.0) {
        const double t_new = last ? b : t + step;
        if (rec.every_step()) {
          rec.push(t_new, y_new);
        } else {
          rec.emit_until(t_new, y_new, [&](double tq) { return dense.at(tq); });
        }
        t = t_new;
        y = y_new;
        k1 = k7;
        ++accepted;
        const double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        // A step shortened to land on a boundary says little about the next one.
        h = std::max(h, step * fac);
        if (!last) h = step * fac;
      } else {
        ++rejected;
        h = step * std::max(0.1, 0.9 * std::pow(err, -0.2));
        if (h < h_min)
          throw NumericError("integrate_trajectory: step-size underflow (stiff or singular "
                             "dynamics)" + at_time(t));
      }
    }
  }

  TrajectoryMeta meta;
  meta.omega_c = eom.omega_c;
  meta.nonlinear_coeff = eom.nonlinear_coeff;
  meta.drive_coeff = eom.drive_coeff;
  meta.drive_omega = eom.drive.omega();
  meta.drive_on = envelope.on;
  meta.drive_off = envelope.off;
  meta.ramp = envelope.ramp;
  meta.method = opt.method == StepMethod::RungeKutta4 ? "rk4" : "dopri5";
  meta.rel_tol = opt.rel_tol;
  meta.abs_tol = opt.abs_tol;
  meta.accepted_steps = accepted;
  meta.rejected_steps = rejected;
  return Trajectory(std::move(rec.times), std::move(rec.phi), std::move(rec.phi_dot),
                    std::move(meta));
}

// ---------------------------------------------------------------------------

double potential_energy(const CircuitParams& params, double phi) {
  return 0.5 * params.e_inductive() * phi * phi - params.e_josephson() * std::cos(phi);
}

namespace {

double potential_slope(const CircuitParams& p, double phi) {
  return p.e_inductive() * phi + p.e_josephson() * std::sin(phi);
}

// Root of U' in [lo, hi] where U' changes sign; Newton steps guarded by
// bisection.
double refine_stationary(const CircuitParams& p, double lo, double hi) {
  double f_lo = potential_slope(p, lo);
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double fx = potential_slope(p, x);
    if (fx == 0.0) return x;
    if ((fx < 0.0) == (f_lo < 0.0)) {
      lo = x;
      f_lo = fx;
    } else {
      hi = x;
    }
    const double d2 = potential_curvature(p, x);
    double next = d2 != 0.0 ? x - fx / d2 : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 4.0 * std::numeric_limits<double>::epsilon() *
                                  std::max(1.0, std::abs(x))) {
      return next;
    }
    x = next;
  }
  return x;
}

}  // namespace

double potential_curvature(const CircuitParams& params, double phi) {
  return params.e_inductive() + params.e_josephson() * std::cos(phi);
}

PotentialLandscape potential_landscape(const CircuitParams& params, double phi_lo, double phi_hi,
                                       std::size_t n_points) {
  require(std::isfinite(phi_lo) && std::isfinite(phi_hi) && phi_hi > phi_lo,
          "potential_landscape: phi range must be finite and increasing");
  require(n_points >= 3, "potential_landscape: n_points must be >= 3");

  PotentialLandscape land;
  land.phi_grid.resize(n_points);
  land.u_values.resize(n_points);
  const double step = (phi_hi - phi_lo) / static_cast<double>(n_points - 1);
  const double mid = 0.5 * (phi_lo + phi_hi);
  const double centre = 0.5 * static_cast<double>(n_points - 1);
  for (std::size_t k = 0; k < n_points; ++k) {
    // Offsets from the midpoint are exact half-integers times the step, so a
    // symmetric range gives a grid mirrored bit-for-bit about zero.
    land.phi_grid[k] = mid + (static_cast<double>(k) - centre) * step;
    land.u_values[k] = potential_energy(params, land.phi_grid[k]);
  }

  const auto& g = land.phi_grid;
  const auto& u = land.u_values;
  std::vector<std::size_t> min_idx;
  for (std::size_t k = 1; k + 1 < n_points; ++k)
    if (u[k] < u[k - 1] && u[k] <= u[k + 1]) min_idx.push_back(k);

  for (std::size_t k : min_idx) {
    const double x = refine_stationary(params, g[k - 1], g[k + 1]);
    land.minima.push_back({x, potential_energy(params, x)});
  }
  for (std::size_t m = 0; m + 1 < min_idx.size(); ++m) {
    const auto first = u.begin() + static_cast<std::ptrdiff_t>(min_idx[m]);
    const auto last = u.begin() + static_cast<std::ptrdiff_t>(min_idx[m + 1]) + 1;
    const auto top = static_cast<std::size_t>(std::max_element(first, last) - u.begin());
    const double lo = g[std::max(top, std::size_t{1}) - 1];
    const double hi = g[std::min(top + 1, n_points - 1)];
    const double x = refine_stationary(params, lo, hi);
    const LandscapePoint peak{x, potential_energy(params, x)};
    land.barrier_tops.push_back(peak);
    land.barrier_heights.push_back(peak.u - std::max(land.minima[m].u, land.minima[m + 1].u));
  }
  return land;
}

long flux_quantum_count(double delta_phi) { return std::lround(delta_phi / kTwoPi); }

double harmonic_level_spacing(const PotentialLandscape& landscape, const CircuitParams& params,
                              std::size_t which_minimum) {
  require(which_minimum < landscape.minima.size(),
          "harmonic_level_spacing: minimum index out of range");
  const double curvature = potential_curvature(params, landscape.minima[which_minimum].phi);
  require(curvature > 0.0,
          "harmonic_level_spacing: U'' <= 0 at the selected point (not a minimum)");
  const double phi0r = kSI.reduced_flux_quantum();
  const double m_eff = phi0r * phi0r * params.c_sigma();
  return kSI.hbar * std::sqrt(curvature / m_eff);
}

}  // namespace scalar_ab
