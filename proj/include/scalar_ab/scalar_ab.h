#ifndef SCALAR_AB_H
#define SCALAR_AB_H

/* C interface to the scalar_ab library. SI units throughout; angular
 * frequencies in rad/s. Every call that can fail returns sab_status and, on
 * failure, leaves a message retrievable with sab_last_error() on the same
 * thread. Handles are opaque and owned by the caller. Output pointers are
 * left untouched on failure. */

#include <stddef.h>

#if defined(_WIN32)
#  if defined(SCALAR_AB_BUILD)
#    define SAB_API __declspec(dllexport)
#  else
#    define SAB_API __declspec(dllimport)
#  endif
#else
#  define SAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sab_status {
  SAB_OK = 0,
  SAB_ERR_INVALID_ARGUMENT = 1, /* violated invariant or precondition */
  SAB_ERR_NUMERIC = 2,          /* integrator or quadrature failure */
  SAB_ERR_IO = 3,
  SAB_ERR_NULL_POINTER = 4,
  SAB_ERR_INTERNAL = 5
} sab_status;

SAB_API const char* sab_last_error(void);
SAB_API const char* sab_status_name(sab_status s);
SAB_API const char* sab_version(void);

typedef struct sab_constants {
  double h;
  double hbar;
  double e_charge;
  double c_light;
  double G_newton;
  double flux_quantum;
} sab_constants;

/* CODATA 2018 values used by every routine in the library. */
SAB_API sab_constants sab_physical_constants(void);

/* ---- circuit ---- */

typedef struct sab_circuit sab_circuit;

typedef struct sab_circuit_elements {
  double c_sphere_F;
  double c_sigma_F;
  double c_gate_F;
  double c_prime_F;
  double inductance_H; /* may be +inf */
  double e_josephson_J;
  double c_josephson_F;
} sab_circuit_elements;

typedef struct sab_circuit_derived {
  double l_josephson_H;
  double e_inductive_J;
  double e_charging_J;
} sab_circuit_derived;

SAB_API sab_status sab_circuit_create(const sab_circuit_elements* elements, sab_circuit** out);
SAB_API void sab_circuit_destroy(sab_circuit* c);
SAB_API sab_status sab_circuit_get_elements(const sab_circuit* c, sab_circuit_elements* out);
SAB_API sab_status sab_circuit_get_derived(const sab_circuit* c, sab_circuit_derived* out);

/* ---- waveforms (voltages in V or potential energies in J) ---- */

typedef struct sab_waveform sab_waveform;

/* offset + amplitude * cos(omega t + phase0) */
SAB_API sab_status sab_waveform_sinusoid(double amplitude, double omega, double phase0,
                                         double offset, sab_waveform** out);
/* One period of samples; `derivative` may be NULL. */
SAB_API sab_status sab_waveform_sampled(const double* t, const double* value,
                                        const double* derivative, size_t n,
                                        int periodic_extension, sab_waveform** out);
SAB_API void sab_waveform_destroy(sab_waveform* w);
SAB_API sab_status sab_waveform_value(const sab_waveform* w, double t, double* out);
SAB_API sab_status sab_waveform_period(const sab_waveform* w, double* out);

/* ---- circuit dynamics ---- */

typedef struct sab_eom_coefficients {
  double omega_c;         /* rad/s */
  double nonlinear_coeff; /* 1/s^2 */
  double drive_coeff;     /* 1/s^2 */
  double coupling;        /* 1/(V s) */
} sab_eom_coefficients;

SAB_API sab_status sab_eom_coefficients_get(const sab_circuit* c, const sab_waveform* drive,
                                            sab_eom_coefficients* out);

typedef enum sab_envelope_shape {
  SAB_ENVELOPE_RAISED_COSINE = 0,
  SAB_ENVELOPE_INSTANTANEOUS = 1
} sab_envelope_shape;

typedef struct sab_envelope {
  double on;   /* -inf: always on */
  double off;  /* +inf: never off */
  double ramp; /* s */
  sab_envelope_shape shape;
} sab_envelope;

SAB_API sab_envelope sab_envelope_always_on(void);
SAB_API sab_status sab_envelope_window(double on, double off, double drive_period,
                                       sab_envelope_shape shape, double ramp_periods,
                                       sab_envelope* out);

typedef enum sab_method { SAB_METHOD_DOPRI45 = 0, SAB_METHOD_RK4 = 1 } sab_method;

typedef struct sab_integrator_options {
  sab_method method;
  double rel_tol;
  double abs_tol;
  double fixed_step;
  double initial_step;
  long max_steps;
  size_t output_samples; /* 0: every accepted step */
} sab_integrator_options;

SAB_API sab_integrator_options sab_integrator_defaults(void);

typedef struct sab_trajectory sab_trajectory;

SAB_API sab_status sab_simulate(const sab_circuit* c, const sab_waveform* drive, double phi0,
                                double phi_dot0, double t0, double t1,
                                const sab_envelope* envelope, /* NULL: always on */
                                const sab_integrator_options* options, /* NULL: defaults */
                                sab_trajectory** out);
SAB_API void sab_trajectory_destroy(sab_trajectory* tr);
SAB_API size_t sab_trajectory_size(const sab_trajectory* tr);
/* Borrowed arrays, valid for the lifetime of the handle. */
SAB_API sab_status sab_trajectory_data(const sab_trajectory* tr, const double** t,
                                       const double** delta_phi, const double** delta_phi_dot);
SAB_API sab_status sab_trajectory_steps(const sab_trajectory* tr, long* accepted, long* rejected);
SAB_API sab_status sab_trajectory_write_csv(const sab_trajectory* tr, const char* path);
SAB_API sab_status sab_trajectory_write_json(const sab_trajectory* tr, const char* path);

/* ---- potential landscape ---- */

typedef struct sab_landscape sab_landscape;

SAB_API sab_status sab_landscape_compute(const sab_circuit* c, double phi_lo, double phi_hi,
                                         size_t n_points, sab_landscape** out);
SAB_API void sab_landscape_destroy(sab_landscape* l);
SAB_API size_t sab_landscape_minima_count(const sab_landscape* l);
SAB_API sab_status sab_landscape_minimum(const sab_landscape* l, size_t i, double* phi,
                                         double* u);
SAB_API size_t sab_landscape_barrier_count(const sab_landscape* l);
SAB_API sab_status sab_landscape_barrier(const sab_landscape* l, size_t i, double* phi, double* u,
                                         double* height);
SAB_API sab_status sab_landscape_level_spacing(const sab_landscape* l, const sab_circuit* c,
                                               size_t which_minimum, double* out);
SAB_API sab_status sab_landscape_write_json(const sab_landscape* l, const char* path);
SAB_API sab_status sab_potential_energy(const sab_circuit* c, double phi, double* out);
SAB_API long sab_flux_quantum_count(double delta_phi);

/* ---- phases ---- */

typedef struct sab_phase_history sab_phase_history;

typedef enum sab_species {
  SAB_SPECIES_COOPER_PAIR = 0,
  SAB_SPECIES_ELECTRON = 1,
  SAB_SPECIES_ION = 2
} sab_species;

typedef struct sab_species_series {
  sab_species species;
  const double* t;
  const double* count;
  size_t n;
} sab_species_series;

SAB_API sab_status sab_electric_phase(double charge, const sab_waveform* voltage,
                                      const double* grid, size_t n, sab_phase_history** out);
SAB_API sab_status sab_bulk_phase(const sab_species_series* series, size_t n_series,
                                  const sab_waveform* voltage, const double* grid, size_t n,
                                  sab_phase_history** out);
/* Builds a history directly from samples; phase[0] must be 0. */
SAB_API sab_status sab_phase_history_create(const double* t, const double* phase, size_t n,
                                            sab_phase_history** out);
SAB_API void sab_phase_history_destroy(sab_phase_history* h);
SAB_API size_t sab_phase_history_size(const sab_phase_history* h);
SAB_API sab_status sab_phase_history_data(const sab_phase_history* h, const double** t,
                                          const double** phase);
SAB_API sab_status sab_phase_history_error(const sab_phase_history* h, double* out);
SAB_API sab_status sab_phase_history_write_csv(const sab_phase_history* h, const char* path);

/* ---- spectra ---- */

typedef struct sab_spectrum sab_spectrum;

typedef struct sab_floquet_info {
  double quasi_energy_J;
  double mean_potential_J;
  double residual;
  int samples_per_period;
} sab_floquet_info;

SAB_API sab_status sab_bessel_j(int n, double alpha, double* out);
SAB_API int sab_default_truncation(double alpha);
SAB_API sab_status sab_jacobi_anger(double alpha, int truncation_n, double base_energy,
                                    double omega, sab_spectrum** out);
/* truncation_n <= 0 selects a default; `info` may be NULL. */
SAB_API sab_status sab_floquet_decompose(const sab_waveform* potential, double base_energy,
                                         int truncation_n, sab_spectrum** out,
                                         sab_floquet_info* info);
SAB_API sab_status sab_fm_spectrum_via_fft(const sab_phase_history* h, double omega,
                                           int truncation_n, double base_energy,
                                           sab_spectrum** out);
SAB_API void sab_spectrum_destroy(sab_spectrum* s);
SAB_API int sab_spectrum_truncation(const sab_spectrum* s);
SAB_API sab_status sab_spectrum_coefficient(const sab_spectrum* s, int n, double* re, double* im);
SAB_API sab_status sab_spectrum_energy(const sab_spectrum* s, int n, double* out);
SAB_API sab_status sab_spectrum_norm(const sab_spectrum* s, double* out);
SAB_API sab_status sab_spectrum_write_json(const sab_spectrum* s, const char* path);

/* ---- gravitational redshift ---- */

typedef struct sab_shell {
  double m0_kg;
  double m1_kg;
  double radius_m;
  double omega;
} sab_shell;

typedef struct sab_atom {
  double energy_i_J;
  double energy_f_J;
  double rest_mass_i_kg;
  double rest_mass_f_kg;
  double charge_C;
  /* low part of rest_mass_f_kg; the excited mass is the sum of the two */
  double rest_mass_f_residual_kg;
} sab_atom;

typedef struct sab_transition_info {
  double carrier_frequency_Hz;
  double local_frequency_Hz;
  double omega;
  double delta_alpha;
  int truncation_n;
  size_t n_lines;
} sab_transition_info;

typedef struct sab_transition sab_transition;

SAB_API sab_status sab_atom_from_ground_mass(double rest_mass_i, double energy_i,
                                             double energy_f, double charge, sab_atom* out);
SAB_API sab_status sab_atom_from_energies(double energy_i, double energy_f, double charge,
                                          sab_atom* out);
SAB_API sab_status sab_shell_potential(const sab_shell* shell, double t, double* out);
SAB_API sab_status sab_redshifted_frequency(double local_frequency, double potential,
                                            double* out);
SAB_API sab_status sab_modulation_indices(const sab_atom* atom, const sab_shell* shell,
                                          double* alpha_i, double* alpha_f, double* delta_alpha);
SAB_API sab_status sab_transition_spectrum(const sab_atom* atom, const sab_shell* shell,
                                           int truncation_n, sab_transition** out);
SAB_API void sab_transition_destroy(sab_transition* tr);
SAB_API sab_status sab_transition_get_info(const sab_transition* tr, sab_transition_info* out);
SAB_API sab_status sab_transition_line(const sab_transition* tr, size_t i, int* n,
                                       double* frequency_Hz, double* relative_amplitude);
SAB_API sab_status sab_transition_write_json(const sab_transition* tr, const char* path);
SAB_API sab_status sab_ion_cancellation_check(const sab_phase_history* h, double base_rate,
                                              double* out);

/* ---- presets ---- */

typedef struct sab_circuit_scenario {
  sab_circuit_elements elements;
  double drive_amplitude_V;
  double drive_omega;
  double drive_phase0;
  sab_envelope envelope;
  double t_end;
  size_t output_samples;
} sab_circuit_scenario;

SAB_API sab_status sab_preset_fig3(sab_circuit_scenario* out);
SAB_API sab_status sab_preset_fig4(sab_circuit_elements* out, double* phi_range);
SAB_API sab_status sab_preset_earth(sab_shell* shell, sab_atom* atom);
SAB_API sab_status sab_preset_supernova(sab_shell* shell, sab_atom* atom);

#ifdef __cplusplus
}
#endif

#endif
