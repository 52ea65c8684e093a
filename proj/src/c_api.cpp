#include "scalar_ab/scalar_ab.h"

#include <fstream>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "scalar_ab/ab_phase.hpp"
#include "scalar_ab/circuit_dynamics.hpp"
#include "scalar_ab/errors.hpp"
#include "scalar_ab/grav_redshift.hpp"
#include "scalar_ab/io.hpp"
#include "scalar_ab/presets.hpp"
#include "scalar_ab/spectral.hpp"

using namespace scalar_ab;

struct sab_circuit {
  CircuitParams p;
};
struct sab_waveform {
  DriveWaveform w;
};
struct sab_trajectory {
  Trajectory tr;
};
struct sab_landscape {
  PotentialLandscape l;
};
struct sab_phase_history {
  PhaseHistory h;
};
struct sab_spectrum {
  SidebandSpectrum s;
};
struct sab_transition {
  TransitionSpectrum t;
};

namespace {

thread_local std::string g_last_error;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

sab_status fail(sab_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

template <class F>
sab_status guard(F&& f) {
  try {
    f();
    return SAB_OK;
  } catch (const InvariantError& e) {
    return fail(SAB_ERR_INVALID_ARGUMENT, e.what());
  } catch (const NumericError& e) {
    return fail(SAB_ERR_NUMERIC, e.what());
  } catch (const IoError& e) {
    return fail(SAB_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(SAB_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SAB_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SAB_ERR_INTERNAL, "unknown error");
  }
}

#define SAB_NONNULL(p)                                           \
  do {                                                           \
    if ((p) == nullptr) return fail(SAB_ERR_NULL_POINTER, #p " is null"); \
  } while (0)

std::ofstream open_out(const char* path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError(std::string("cannot open '") + path + "' for writing");
  return f;
}

void finish(std::ofstream& f, const char* path) {
  f.flush();
  if (!f) throw IoError(std::string("write to '") + path + "' failed");
}

void dump_json(const nlohmann::json& j, const char* path) {
  auto f = open_out(path);
  f << j.dump(2) << '\n';
  finish(f, path);
}

CircuitElements to_cpp(const sab_circuit_elements& e) {
  CircuitElements c;
  c.c_sphere = e.c_sphere_F;
  c.c_sigma = e.c_sigma_F;
  c.c_gate = e.c_gate_F;
  c.c_prime = e.c_prime_F;
  c.inductance = e.inductance_H;
  c.e_josephson = e.e_josephson_J;
  c.c_josephson = e.c_josephson_F;
  return c;
}

sab_circuit_elements to_c(const CircuitElements& c) {
  return {c.c_sphere, c.c_sigma, c.c_gate, c.c_prime, c.inductance, c.e_josephson, c.c_josephson};
}

DriveEnvelope to_cpp(const sab_envelope& e) {
  DriveEnvelope d;
  d.on = e.on;
  d.off = e.off;
  d.ramp = e.ramp;
  d.shape = e.shape == SAB_ENVELOPE_INSTANTANEOUS ? EnvelopeShape::Instantaneous
                                                  : EnvelopeShape::RaisedCosine;
  return d;
}

sab_envelope to_c(const DriveEnvelope& d) {
  return {d.on, d.off, d.ramp,
          d.shape == EnvelopeShape::Instantaneous ? SAB_ENVELOPE_INSTANTANEOUS
                                                  : SAB_ENVELOPE_RAISED_COSINE};
}

MassShell to_cpp(const sab_shell& s) { return MassShell(s.m0_kg, s.m1_kg, s.radius_m, s.omega); }
sab_shell to_c(const MassShell& s) { return {s.m0(), s.m1(), s.radius(), s.omega()}; }

TwoLevelAtom to_cpp(const sab_atom& a) {
  return TwoLevelAtom(a.energy_i_J, a.energy_f_J, a.rest_mass_i_kg, a.rest_mass_f_kg, a.charge_C,
                      a.rest_mass_f_residual_kg);
}
sab_atom to_c(const TwoLevelAtom& a) {
  return {a.energy_i(), a.energy_f(), a.rest_mass_i(), a.rest_mass_f(), a.charge(),
          a.rest_mass_f_residual()};
}

std::span<const double> grid_span(const double* grid, std::size_t n) {
  detail::require(grid != nullptr || n == 0, "grid is null");
  return {grid, n};
}

}  // namespace

extern "C" {

const char* sab_last_error(void) { return g_last_error.c_str(); }

const char* sab_status_name(sab_status s) {
  switch (s) {
    case SAB_OK: return "ok";
    case SAB_ERR_INVALID_ARGUMENT: return "invalid argument";
    case SAB_ERR_NUMERIC: return "numeric failure";
    case SAB_ERR_IO: return "i/o error";
    case SAB_ERR_NULL_POINTER: return "null pointer";
    case SAB_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* sab_version(void) { return "1.0.0"; }

sab_constants sab_physical_constants(void) {
  return {kSI.h, kSI.hbar, kSI.e_charge, kSI.c_light, kSI.G_newton, kSI.flux_quantum};
}

// circuit

sab_status sab_circuit_create(const sab_circuit_elements* elements, sab_circuit** out) {
  SAB_NONNULL(elements);
  SAB_NONNULL(out);
  return guard([&] { *out = new sab_circuit{CircuitParams(to_cpp(*elements))}; });
}

void sab_circuit_destroy(sab_circuit* c) { delete c; }

sab_status sab_circuit_get_elements(const sab_circuit* c, sab_circuit_elements* out) {
  SAB_NONNULL(c);
  SAB_NONNULL(out);
  *out = to_c(c->p.elements());
  return SAB_OK;
}

sab_status sab_circuit_get_derived(const sab_circuit* c, sab_circuit_derived* out) {
  SAB_NONNULL(c);
  SAB_NONNULL(out);
  *out = {c->p.l_josephson(), c->p.e_inductive(), c->p.e_charging()};
  return SAB_OK;
}

// waveforms

sab_status sab_waveform_sinusoid(double amplitude, double omega, double phase0, double offset,
                                 sab_waveform** out) {
  SAB_NONNULL(out);
  return guard(
      [&] { *out = new sab_waveform{DriveWaveform::sinusoid(amplitude, omega, phase0, offset)}; });
}

sab_status sab_waveform_sampled(const double* t, const double* value, const double* derivative,
                                std::size_t n, int periodic_extension, sab_waveform** out) {
  SAB_NONNULL(t);
  SAB_NONNULL(value);
  SAB_NONNULL(out);
  return guard([&] {
    std::vector<Sample> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = {t[i], value[i]};
    std::optional<std::vector<Sample>> d;
    if (derivative) {
      d.emplace(n);
      for (std::size_t i = 0; i < n; ++i) (*d)[i] = {t[i], derivative[i]};
    }
    *out = new sab_waveform{DriveWaveform::sampled(std::move(s), std::move(d), periodic_extension != 0)};
  });
}

void sab_waveform_destroy(sab_waveform* w) { delete w; }

sab_status sab_waveform_value(const sab_waveform* w, double t, double* out) {
  SAB_NONNULL(w);
  SAB_NONNULL(out);
  return guard([&] { *out = w->w.value(t); });
}

sab_status sab_waveform_period(const sab_waveform* w, double* out) {
  SAB_NONNULL(w);
  SAB_NONNULL(out);
  *out = w->w.period();
  return SAB_OK;
}

// dynamics

sab_status sab_eom_coefficients_get(const sab_circuit* c, const sab_waveform* drive,
                                    sab_eom_coefficients* out) {
  SAB_NONNULL(c);
  SAB_NONNULL(drive);
  SAB_NONNULL(out);
  return guard([&] {
    const EomParams e = build_eom(c->p, drive->w);
    *out = {e.omega_c, e.nonlinear_coeff, e.drive_coeff, e.coupling};
  });
}

sab_envelope sab_envelope_always_on(void) { return to_c(DriveEnvelope::always_on()); }

sab_status sab_envelope_window(double on, double off, double drive_period, sab_envelope_shape shape,
                               double ramp_periods, sab_envelope* out) {
  SAB_NONNULL(out);
  return guard([&] {
    const auto s = shape == SAB_ENVELOPE_INSTANTANEOUS ? EnvelopeShape::Instantaneous
                                                       : EnvelopeShape::RaisedCosine;
    *out = to_c(DriveEnvelope::window(on, off, drive_period, s, ramp_periods));
  });
}

sab_integrator_options sab_integrator_defaults(void) {
  const IntegratorOptions o;
  return {SAB_METHOD_DOPRI45, o.rel_tol,   o.abs_tol,        o.fixed_step,
          o.initial_step,     o.max_steps, o.output_samples};
}

sab_status sab_simulate(const sab_circuit* c, const sab_waveform* drive, double phi0,
                        double phi_dot0, double t0, double t1, const sab_envelope* envelope,
                        const sab_integrator_options* options, sab_trajectory** out) {
  SAB_NONNULL(c);
  SAB_NONNULL(drive);
  SAB_NONNULL(out);
  return guard([&] {
    IntegratorOptions o;
    if (options) {
      o.method = options->method == SAB_METHOD_RK4 ? StepMethod::RungeKutta4
                                                   : StepMethod::DormandPrince45;
      o.rel_tol = options->rel_tol;
      o.abs_tol = options->abs_tol;
      o.fixed_step = options->fixed_step;
      o.initial_step = options->initial_step;
      o.max_steps = options->max_steps;
      o.output_samples = options->output_samples;
    }
    const DriveEnvelope env = envelope ? to_cpp(*envelope) : DriveEnvelope::always_on();
    const EomParams eom = build_eom(c->p, drive->w);
    *out = new sab_trajectory{integrate_trajectory(eom, phi0, phi_dot0, t0, t1, env, o)};
  });
}

void sab_trajectory_destroy(sab_trajectory* tr) { delete tr; }

std::size_t sab_trajectory_size(const sab_trajectory* tr) { return tr ? tr->tr.size() : 0; }

sab_status sab_trajectory_data(const sab_trajectory* tr, const double** t,
                               const double** delta_phi, const double** delta_phi_dot) {
  SAB_NONNULL(tr);
  if (t) *t = tr->tr.times().data();
  if (delta_phi) *delta_phi = tr->tr.delta_phi().data();
  if (delta_phi_dot) *delta_phi_dot = tr->tr.delta_phi_dot().data();
  return SAB_OK;
}

sab_status sab_trajectory_steps(const sab_trajectory* tr, long* accepted, long* rejected) {
  SAB_NONNULL(tr);
  if (accepted) *accepted = tr->tr.meta().accepted_steps;
  if (rejected) *rejected = tr->tr.meta().rejected_steps;
  return SAB_OK;
}

sab_status sab_trajectory_write_csv(const sab_trajectory* tr, const char* path) {
  SAB_NONNULL(tr);
  SAB_NONNULL(path);
  return guard([&] {
    auto f = open_out(path);
    write_trajectory_csv(f, tr->tr);
    finish(f, path);
  });
}

sab_status sab_trajectory_write_json(const sab_trajectory* tr, const char* path) {
  SAB_NONNULL(tr);
  SAB_NONNULL(path);
  return guard([&] { dump_json(to_json_value(tr->tr), path); });
}

// landscape

sab_status sab_landscape_compute(const sab_circuit* c, double phi_lo, double phi_hi,
                                 std::size_t n_points, sab_landscape** out) {
  SAB_NONNULL(c);
  SAB_NONNULL(out);
  return guard(
      [&] { *out = new sab_landscape{potential_landscape(c->p, phi_lo, phi_hi, n_points)}; });
}

void sab_landscape_destroy(sab_landscape* l) { delete l; }

std::size_t sab_landscape_minima_count(const sab_landscape* l) {
  return l ? l->l.minima.size() : 0;
}

sab_status sab_landscape_minimum(const sab_landscape* l, std::size_t i, double* phi, double* u) {
  SAB_NONNULL(l);
  if (i >= l->l.minima.size()) return fail(SAB_ERR_INVALID_ARGUMENT, "minimum index out of range");
  if (phi) *phi = l->l.minima[i].phi;
  if (u) *u = l->l.minima[i].u;
  return SAB_OK;
}

std::size_t sab_landscape_barrier_count(const sab_landscape* l) {
  return l ? l->l.barrier_tops.size() : 0;
}

sab_status sab_landscape_barrier(const sab_landscape* l, std::size_t i, double* phi, double* u,
                                 double* height) {
  SAB_NONNULL(l);
  if (i >= l->l.barrier_tops.size())
    return fail(SAB_ERR_INVALID_ARGUMENT, "barrier index out of range");
  if (phi) *phi = l->l.barrier_tops[i].phi;
  if (u) *u = l->l.barrier_tops[i].u;
  if (height) *height = l->l.barrier_heights[i];
  return SAB_OK;
}

sab_status sab_landscape_level_spacing(const sab_landscape* l, const sab_circuit* c,
                                       std::size_t which_minimum, double* out) {
  SAB_NONNULL(l);
  SAB_NONNULL(c);
  SAB_NONNULL(out);
  return guard([&] { *out = harmonic_level_spacing(l->l, c->p, which_minimum); });
}

sab_status sab_landscape_write_json(const sab_landscape* l, const char* path) {
  SAB_NONNULL(l);
  SAB_NONNULL(path);
  return guard([&] { dump_json(landscape_to_json(l->l), path); });
}

sab_status sab_potential_energy(const sab_circuit* c, double phi, double* out) {
  SAB_NONNULL(c);
  SAB_NONNULL(out);
  return guard([&] { *out = potential_energy(c->p, phi); });
}

long sab_flux_quantum_count(double delta_phi) { return flux_quantum_count(delta_phi); }

// phases

sab_status sab_electric_phase(double charge, const sab_waveform* voltage, const double* grid,
                              std::size_t n, sab_phase_history** out) {
  SAB_NONNULL(voltage);
  SAB_NONNULL(out);
  return guard([&] {
    *out = new sab_phase_history{
        accumulate_electric_phase(charge, voltage->w, grid_span(grid, n))};
  });
}

sab_status sab_bulk_phase(const sab_species_series* series, std::size_t n_series,
                          const sab_waveform* voltage, const double* grid, std::size_t n,
                          sab_phase_history** out) {
  SAB_NONNULL(voltage);
  SAB_NONNULL(out);
  if (n_series > 0) SAB_NONNULL(series);
  return guard([&] {
    std::vector<SpeciesCount> counts;
    for (std::size_t k = 0; k < n_series; ++k) {
      const auto& s = series[k];
      detail::require(s.t != nullptr && s.count != nullptr, "species series arrays are null");
      std::vector<Sample> samples(s.n);
      for (std::size_t i = 0; i < s.n; ++i) samples[i] = {s.t[i], s.count[i]};
      Species sp = Species::CooperPair;
      switch (s.species) {
        case SAB_SPECIES_COOPER_PAIR: sp = Species::CooperPair; break;
        case SAB_SPECIES_ELECTRON: sp = Species::Electron; break;
        case SAB_SPECIES_ION: sp = Species::Ion; break;
        default: detail::fail_invariant("unknown species code");
      }
      counts.emplace_back(sp, std::move(samples));
    }
    *out = new sab_phase_history{net_bulk_phase(counts, voltage->w, grid_span(grid, n))};
  });
}

sab_status sab_phase_history_create(const double* t, const double* phase, std::size_t n,
                                    sab_phase_history** out) {
  SAB_NONNULL(t);
  SAB_NONNULL(phase);
  SAB_NONNULL(out);
  return guard([&] {
    *out = new sab_phase_history{
        PhaseHistory(std::vector<double>(t, t + n), std::vector<double>(phase, phase + n))};
  });
}

void sab_phase_history_destroy(sab_phase_history* h) { delete h; }

std::size_t sab_phase_history_size(const sab_phase_history* h) { return h ? h->h.size() : 0; }

sab_status sab_phase_history_data(const sab_phase_history* h, const double** t,
                                  const double** phase) {
  SAB_NONNULL(h);
  if (t) *t = h->h.times().data();
  if (phase) *phase = h->h.phase().data();
  return SAB_OK;
}

sab_status sab_phase_history_error(const sab_phase_history* h, double* out) {
  SAB_NONNULL(h);
  SAB_NONNULL(out);
  *out = h->h.error_estimate();
  return SAB_OK;
}

sab_status sab_phase_history_write_csv(const sab_phase_history* h, const char* path) {
  SAB_NONNULL(h);
  SAB_NONNULL(path);
  return guard([&] {
    auto f = open_out(path);
    write_phase_history_csv(f, h->h);
    finish(f, path);
  });
}

// spectra

sab_status sab_bessel_j(int n, double alpha, double* out) {
  SAB_NONNULL(out);
  return guard([&] { *out = bessel_j(n, alpha); });
}

int sab_default_truncation(double alpha) {
  try {
    return default_truncation(alpha);
  } catch (const std::exception& e) {
    fail(SAB_ERR_INVALID_ARGUMENT, e.what());
    return -1;
  }
}

sab_status sab_jacobi_anger(double alpha, int truncation_n, double base_energy, double omega,
                            sab_spectrum** out) {
  SAB_NONNULL(out);
  return guard([&] {
    *out = new sab_spectrum{jacobi_anger_coeffs(alpha, truncation_n, base_energy, omega)};
  });
}

sab_status sab_floquet_decompose(const sab_waveform* potential, double base_energy,
                                 int truncation_n, sab_spectrum** out, sab_floquet_info* info) {
  SAB_NONNULL(potential);
  SAB_NONNULL(out);
  return guard([&] {
    const auto d = floquet_decompose(potential->w, base_energy, truncation_n);
    auto* s = new sab_spectrum{d.spectrum()};
    if (info) *info = {d.quasi_energy, d.mean_potential, d.residual, d.samples_per_period};
    *out = s;
  });
}

sab_status sab_fm_spectrum_via_fft(const sab_phase_history* h, double omega, int truncation_n,
                                   double base_energy, sab_spectrum** out) {
  SAB_NONNULL(h);
  SAB_NONNULL(out);
  return guard([&] {
    *out = new sab_spectrum{fm_spectrum_via_fft(h->h, omega, truncation_n, base_energy)};
  });
}

void sab_spectrum_destroy(sab_spectrum* s) { delete s; }

int sab_spectrum_truncation(const sab_spectrum* s) { return s ? s->s.truncation_n() : -1; }

sab_status sab_spectrum_coefficient(const sab_spectrum* s, int n, double* re, double* im) {
  SAB_NONNULL(s);
  const auto c = s->s.coefficient(n);
  if (re) *re = c.real();
  if (im) *im = c.imag();
  return SAB_OK;
}

sab_status sab_spectrum_energy(const sab_spectrum* s, int n, double* out) {
  SAB_NONNULL(s);
  SAB_NONNULL(out);
  *out = s->s.energy(n);
  return SAB_OK;
}

sab_status sab_spectrum_norm(const sab_spectrum* s, double* out) {
  SAB_NONNULL(s);
  SAB_NONNULL(out);
  *out = s->s.norm();
  return SAB_OK;
}

sab_status sab_spectrum_write_json(const sab_spectrum* s, const char* path) {
  SAB_NONNULL(s);
  SAB_NONNULL(path);
  return guard([&] { dump_json(spectrum_to_json(s->s), path); });
}

// gravitational redshift

sab_status sab_atom_from_ground_mass(double rest_mass_i, double energy_i, double energy_f,
                                     double charge, sab_atom* out) {
  SAB_NONNULL(out);
  return guard([&] {
    *out = to_c(TwoLevelAtom::from_ground_mass(rest_mass_i, energy_i, energy_f, charge));
  });
}

sab_status sab_atom_from_energies(double energy_i, double energy_f, double charge, sab_atom* out) {
  SAB_NONNULL(out);
  return guard([&] { *out = to_c(TwoLevelAtom::from_energies(energy_i, energy_f, charge)); });
}

sab_status sab_shell_potential(const sab_shell* shell, double t, double* out) {
  SAB_NONNULL(shell);
  SAB_NONNULL(out);
  return guard([&] { *out = shell_potential(to_cpp(*shell), t); });
}

sab_status sab_redshifted_frequency(double local_frequency, double potential, double* out) {
  SAB_NONNULL(out);
  return guard([&] { *out = redshifted_frequency(local_frequency, potential); });
}

sab_status sab_modulation_indices(const sab_atom* atom, const sab_shell* shell, double* alpha_i,
                                  double* alpha_f, double* delta_alpha) {
  SAB_NONNULL(atom);
  SAB_NONNULL(shell);
  return guard([&] {
    const auto m = modulation_indices(to_cpp(*atom), to_cpp(*shell));
    if (alpha_i) *alpha_i = m.alpha_i;
    if (alpha_f) *alpha_f = m.alpha_f;
    if (delta_alpha) *delta_alpha = m.delta_alpha;
  });
}

sab_status sab_transition_spectrum(const sab_atom* atom, const sab_shell* shell, int truncation_n,
                                   sab_transition** out) {
  SAB_NONNULL(atom);
  SAB_NONNULL(shell);
  SAB_NONNULL(out);
  return guard([&] {
    *out = new sab_transition{
        transition_sideband_spectrum(to_cpp(*atom), to_cpp(*shell), truncation_n)};
  });
}

void sab_transition_destroy(sab_transition* tr) { delete tr; }

sab_status sab_transition_get_info(const sab_transition* tr, sab_transition_info* out) {
  SAB_NONNULL(tr);
  SAB_NONNULL(out);
  const auto& t = tr->t;
  *out = {t.carrier_frequency, t.local_frequency, t.omega,
          t.delta_alpha,       t.truncation_n,    t.sideband_lines.size()};
  return SAB_OK;
}

sab_status sab_transition_line(const sab_transition* tr, std::size_t i, int* n,
                               double* frequency_Hz, double* relative_amplitude) {
  SAB_NONNULL(tr);
  if (i >= tr->t.sideband_lines.size())
    return fail(SAB_ERR_INVALID_ARGUMENT, "line index out of range");
  const auto& l = tr->t.sideband_lines[i];
  if (n) *n = l.n;
  if (frequency_Hz) *frequency_Hz = l.frequency;
  if (relative_amplitude) *relative_amplitude = l.relative_amplitude;
  return SAB_OK;
}

sab_status sab_transition_write_json(const sab_transition* tr, const char* path) {
  SAB_NONNULL(tr);
  SAB_NONNULL(path);
  return guard([&] { dump_json(transition_to_json(tr->t), path); });
}

sab_status sab_ion_cancellation_check(const sab_phase_history* h, double base_rate, double* out) {
  SAB_NONNULL(h);
  SAB_NONNULL(out);
  return guard([&] { *out = ion_cancellation_check(h->h, base_rate); });
}

// presets

sab_status sab_preset_fig3(sab_circuit_scenario* out) {
  SAB_NONNULL(out);
  return guard([&] {
    const auto s = presets::fig3_scenario();
    *out = {to_c(s.circuit.elements()), s.drive.amplitude(), s.drive.omega(), s.drive.phase0(),
            to_c(s.envelope),           s.t_end,             s.output_samples};
  });
}

sab_status sab_preset_fig4(sab_circuit_elements* out, double* phi_range) {
  SAB_NONNULL(out);
  return guard([&] {
    *out = to_c(presets::fig4_circuit().elements());
    if (phi_range) *phi_range = presets::kFig4PhiRange;
  });
}

sab_status sab_preset_earth(sab_shell* shell, sab_atom* atom) {
  return guard([&] {
    if (shell) *shell = to_c(presets::earth_shell());
    if (atom) *atom = to_c(presets::earth_atom());
  });
}

sab_status sab_preset_supernova(sab_shell* shell, sab_atom* atom) {
  return guard([&] {
    if (shell) *shell = to_c(presets::supernova_shell());
    if (atom) *atom = to_c(presets::earth_atom());
  });
}

}  // extern "C"
