#include "runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <numbers>
#include <vector>

namespace sab_cli {

namespace {

template <class T, void (*Destroy)(T*)>
struct Deleter {
  void operator()(T* p) const { Destroy(p); }
};

using Circuit = std::unique_ptr<sab_circuit, Deleter<sab_circuit, sab_circuit_destroy>>;
using Waveform = std::unique_ptr<sab_waveform, Deleter<sab_waveform, sab_waveform_destroy>>;
using TrajectoryPtr =
    std::unique_ptr<sab_trajectory, Deleter<sab_trajectory, sab_trajectory_destroy>>;
using Landscape = std::unique_ptr<sab_landscape, Deleter<sab_landscape, sab_landscape_destroy>>;
using Spectrum = std::unique_ptr<sab_spectrum, Deleter<sab_spectrum, sab_spectrum_destroy>>;
using History =
    std::unique_ptr<sab_phase_history, Deleter<sab_phase_history, sab_phase_history_destroy>>;
using Transition =
    std::unique_ptr<sab_transition, Deleter<sab_transition, sab_transition_destroy>>;

// Carries a failed status out of the run.
struct Failure {
  sab_status status;
  std::string message;
};

void check(sab_status s, const char* what) {
  if (s != SAB_OK) throw Failure{s, std::string(what) + ": " + sab_last_error()};
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::string g6(double x) { return fmt("%.6g", x); }

using Summary = std::string;

Summary run(const CircuitDynamicsParams& p, const ExperimentConfig& cfg, const std::string& path) {
  sab_circuit* c = nullptr;
  check(sab_circuit_create(&p.elements, &c), "circuit");
  Circuit circuit(c);
  sab_waveform* w = nullptr;
  check(sab_waveform_sinusoid(p.drive_amplitude_V, p.drive_omega, p.drive_phase0,
                              p.drive_offset_V, &w),
        "drive");
  Waveform drive(w);

  sab_eom_coefficients eom;
  check(sab_eom_coefficients_get(circuit.get(), drive.get(), &eom), "equation of motion");

  sab_integrator_options opt = sab_integrator_defaults();
  opt.method = p.method;
  opt.fixed_step = p.fixed_step;
  opt.rel_tol = cfg.numerics.rel_tol;
  opt.abs_tol = cfg.numerics.abs_tol;
  opt.output_samples = p.output_samples;

  sab_trajectory* t = nullptr;
  check(sab_simulate(circuit.get(), drive.get(), p.phi0, p.phi_dot0, 0.0, p.t_end, &p.envelope,
                     &opt, &t),
        "integration");
  TrajectoryPtr traj(t);

  if (cfg.output.format == OutputFormat::Csv)
    check(sab_trajectory_write_csv(traj.get(), path.c_str()), "output");
  else
    check(sab_trajectory_write_json(traj.get(), path.c_str()), "output");

  const double *times = nullptr, *phi = nullptr;
  check(sab_trajectory_data(traj.get(), &times, &phi, nullptr), "trajectory");
  const std::size_t n = sab_trajectory_size(traj.get());
  double peak = 0.0, post_peak = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    peak = std::max(peak, std::abs(phi[i]));
    if (times[i] >= p.envelope.off) post_peak = std::max(post_peak, std::abs(phi[i]));
  }
  Summary s = "CircuitDynamics: omega_c=" + g6(eom.omega_c) +
              " rad/s drive_coeff=" + g6(eom.drive_coeff) + " s^-2 max|dphi|=" + g6(peak) + " rad";
  if (std::isfinite(p.envelope.off) && p.envelope.off < p.t_end)
    s += " post-drive max|dphi|=" + g6(post_peak) + " rad";
  return s + " samples=" + std::to_string(n);
}

Summary run(const LandscapeParams& p, const ExperimentConfig&, const std::string& path) {
  sab_circuit* c = nullptr;
  check(sab_circuit_create(&p.elements, &c), "circuit");
  Circuit circuit(c);
  sab_landscape* l = nullptr;
  check(sab_landscape_compute(circuit.get(), p.phi_lo, p.phi_hi, p.n_points, &l), "landscape");
  Landscape land(l);
  check(sab_landscape_write_json(land.get(), path.c_str()), "output");

  const std::size_t n_min = sab_landscape_minima_count(land.get());
  Summary s = "PotentialLandscape: minima=" + std::to_string(n_min);
  if (n_min > 0) {
    // The minimum nearest phi = 0.
    std::size_t best = 0;
    double best_phi = INFINITY;
    for (std::size_t i = 0; i < n_min; ++i) {
      double phi = 0.0;
      check(sab_landscape_minimum(land.get(), i, &phi, nullptr), "landscape");
      if (std::abs(phi) < std::abs(best_phi)) {
        best_phi = phi;
        best = i;
      }
    }
    double spacing = 0.0;
    check(sab_landscape_level_spacing(land.get(), circuit.get(), best, &spacing), "level spacing");
    s += " central_minimum=" + g6(best_phi) + " rad level_spacing=" +
         g6(spacing / sab_physical_constants().h / 1e9) + " GHz";
  }
  if (sab_landscape_barrier_count(land.get()) > 0) {
    double h = 0.0;
    check(sab_landscape_barrier(land.get(), 0, nullptr, nullptr, &h), "landscape");
    s += " first_barrier=" + g6(h / sab_physical_constants().h / 1e9) + " GHz";
  }
  return s;
}

Summary run(const SidebandParams& p, const ExperimentConfig& cfg, const std::string& path) {
  int trunc = cfg.numerics.truncation_n;
  if (trunc <= 0) {
    trunc = sab_default_truncation(p.alpha);
    if (trunc < 0) throw Failure{SAB_ERR_INVALID_ARGUMENT, std::string("truncation: ") + sab_last_error()};
  }
  sab_spectrum* sp = nullptr;
  check(sab_jacobi_anger(p.alpha, trunc, p.base_energy, p.omega, &sp), "spectrum");
  Spectrum spec(sp);
  check(sab_spectrum_write_json(spec.get(), path.c_str()), "output");
  double norm = 0.0;
  check(sab_spectrum_norm(spec.get(), &norm), "spectrum");
  return "ElectricSidebands: alpha=" + g6(p.alpha) + " truncation_n=" + std::to_string(trunc) +
         " norm=" + fmt("%.15g", norm);
}

Summary run(const FloquetParams& p, const ExperimentConfig& cfg, const std::string& path) {
  sab_waveform* w = nullptr;
  if (p.sampled)
    check(sab_waveform_sampled(p.t.data(), p.u.data(), nullptr, p.t.size(), 1, &w), "potential");
  else
    check(sab_waveform_sinusoid(p.amplitude_J, p.omega, p.phase0, p.offset_J, &w), "potential");
  Waveform pot(w);
  sab_spectrum* sp = nullptr;
  sab_floquet_info info;
  check(sab_floquet_decompose(pot.get(), p.base_energy, cfg.numerics.truncation_n, &sp, &info),
        "floquet");
  Spectrum spec(sp);
  check(sab_spectrum_write_json(spec.get(), path.c_str()), "output");
  return "FloquetDecompose: quasi_energy=" + g6(info.quasi_energy_J) +
         " J truncation_n=" + std::to_string(sab_spectrum_truncation(spec.get())) +
         " residual=" + g6(info.residual);
}

Summary run(const GravParams& p, const ExperimentConfig& cfg, const std::string& path) {
  sab_atom atom;
  check(sab_atom_from_ground_mass(p.atom_ground_mass, 0.0, p.transition_energy, 0.0, &atom),
        "atom");
  sab_transition* t = nullptr;
  check(sab_transition_spectrum(&atom, &p.shell, cfg.numerics.truncation_n, &t), "spectrum");
  Transition tr(t);
  check(sab_transition_write_json(tr.get(), path.c_str()), "output");
  sab_transition_info info;
  check(sab_transition_get_info(tr.get(), &info), "spectrum");
  const double shift =
      (info.local_frequency_Hz - info.carrier_frequency_Hz) / info.local_frequency_Hz;
  return "GravRedshift: carrier=" + fmt("%.12g", info.carrier_frequency_Hz) +
         " Hz fractional_shift=" + g6(shift) + " delta_alpha=" + g6(info.delta_alpha) +
         " lines=" + std::to_string(info.n_lines);
}

Summary run(const BulkPhaseParams& p, const ExperimentConfig&, const std::string& path) {
  sab_waveform* w = nullptr;
  check(sab_waveform_sinusoid(p.drive_amplitude_V, p.drive_omega, p.drive_phase0, p.drive_offset_V,
                              &w),
        "drive");
  Waveform drive(w);

  std::vector<double> grid(p.n_steps + 1);
  for (std::size_t k = 0; k <= p.n_steps; ++k)
    grid[k] = k == p.n_steps ? p.t_end
                             : p.t_end * static_cast<double>(k) / static_cast<double>(p.n_steps);

  const double span_t[2] = {0.0, p.t_end};
  double counts[3][2] = {{p.cooper_pairs, p.cooper_pairs},
                         {p.electrons, p.electrons},
                         {p.ions, p.ions}};
  const sab_species codes[3] = {SAB_SPECIES_COOPER_PAIR, SAB_SPECIES_ELECTRON, SAB_SPECIES_ION};
  std::vector<sab_species_series> series;
  for (int k = 0; k < 3; ++k)
    if (counts[k][0] != 0.0) series.push_back({codes[k], span_t, counts[k], 2});

  sab_phase_history* h = nullptr;
  check(sab_bulk_phase(series.data(), series.size(), drive.get(), grid.data(), grid.size(), &h),
        "bulk phase");
  History hist(h);
  check(sab_phase_history_write_csv(hist.get(), path.c_str()), "output");
  const double* phase = nullptr;
  check(sab_phase_history_data(hist.get(), nullptr, &phase), "bulk phase");
  return "BulkPhase: final_phase=" + g6(phase[grid.size() - 1]) + " rad species=" +
         std::to_string(series.size());
}

}  // namespace

std::string resolve_output_path(const ExperimentConfig& cfg) {
  if (!cfg.output.path.empty()) return cfg.output.path;
  std::string stem = cfg.preset.empty() ? std::string(experiment_name(cfg.experiment)) : cfg.preset;
  return stem + (cfg.output.format == OutputFormat::Csv ? ".csv" : ".json");
}

RunResult run_experiment(const ExperimentConfig& cfg) {
  RunResult r;
  r.output_path = resolve_output_path(cfg);
  try {
    const Summary s =
        std::visit([&](const auto& p) { return run(p, cfg, r.output_path); }, cfg.parameters);
    r.summary = s + " -> " + r.output_path;
  } catch (const Failure& f) {
    r.diagnostic = f.message;
    r.exit_code = f.status == SAB_ERR_NUMERIC || f.status == SAB_ERR_INTERNAL ? kExitNumeric
                                                                              : kExitConfig;
  }
  return r;
}

}  // namespace sab_cli
