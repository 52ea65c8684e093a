#pragma once

// Experiment configuration: a JSON document with four sections.
//
//   {
//     "experiment": "CircuitDynamics",
//     "preset": "fig3",                      optional
//     "parameters": { "drive_amplitude_uV": 1.0, ... },
//     "numerics": { "rel_tol": 1e-12, "abs_tol": 1e-14, "truncation_n": 0, "seed": 0 },
//     "output": { "path": "fig3.csv", "format": "csv" }
//   }
//
// Parameter keys carry their unit as a suffix. Frequencies given in Hz, MHz
// or GHz are ordinary frequencies f; they become angular frequencies
// 2 pi f internally. Energies quoted in GHz mean h * f.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "scalar_ab/scalar_ab.h"

namespace sab_cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Experiment {
  CircuitDynamics,
  PotentialLandscape,
  ElectricSidebands,
  FloquetDecompose,
  GravRedshift,
  BulkPhase
};

enum class OutputFormat { Csv, Json };

struct CircuitDynamicsParams {
  sab_circuit_elements elements{};
  double drive_amplitude_V = 0.0;
  double drive_omega = 0.0;
  double drive_phase0 = 0.0;
  double drive_offset_V = 0.0;
  sab_envelope envelope{};
  double phi0 = 0.0;
  double phi_dot0 = 0.0;
  double t_end = 0.0;
  std::size_t output_samples = 4001;
  sab_method method = SAB_METHOD_DOPRI45;
  double fixed_step = 0.0;
};

struct LandscapeParams {
  sab_circuit_elements elements{};
  double phi_lo = 0.0;
  double phi_hi = 0.0;
  std::size_t n_points = 4001;
};

struct SidebandParams {
  double alpha = 0.0;
  double omega = 0.0;
  double base_energy = 0.0;
};

struct FloquetParams {
  bool sampled = false;
  double amplitude_J = 0.0;
  double omega = 0.0;
  double phase0 = 0.0;
  double offset_J = 0.0;
  std::vector<double> t;
  std::vector<double> u;
  double base_energy = 0.0;
};

struct GravParams {
  sab_shell shell{};
  double atom_ground_mass = 0.0;
  double transition_energy = 0.0;
};

struct BulkPhaseParams {
  double drive_amplitude_V = 0.0;
  double drive_omega = 0.0;
  double drive_phase0 = 0.0;
  double drive_offset_V = 0.0;
  double t_end = 0.0;
  std::size_t n_steps = 1000;
  double cooper_pairs = 0.0;
  double electrons = 0.0;
  double ions = 0.0;
};

using Parameters = std::variant<CircuitDynamicsParams, LandscapeParams, SidebandParams,
                                FloquetParams, GravParams, BulkPhaseParams>;

struct Numerics {
  double rel_tol = 1e-12;
  double abs_tol = 1e-14;
  int truncation_n = 0;
  std::optional<long> seed;  // reserved
};

struct OutputSpec {
  std::string path;
  OutputFormat format = OutputFormat::Json;
};

struct ExperimentConfig {
  Experiment experiment = Experiment::CircuitDynamics;
  std::string preset;
  Parameters parameters;
  Numerics numerics;
  OutputSpec output;
};

std::string_view experiment_name(Experiment e);
// Accepts CamelCase, kebab-case and snake_case spellings.
std::optional<Experiment> experiment_from_name(std::string_view name);

const std::vector<std::string>& preset_names();
bool is_preset(std::string_view name);
Experiment preset_experiment(std::string_view preset);

// `fallback` supplies the experiment when the document does not name one
// (the positional argument of the command line). Throws ConfigError.
ExperimentConfig parse_config(std::string_view text,
                              std::optional<Experiment> fallback = std::nullopt);

// Command-line --out / --format overrides, validated like the config keys.
void override_output(ExperimentConfig& cfg, const std::optional<std::string>& path,
                     const std::optional<std::string>& format);

// A config document equivalent to the named preset.
std::string dump_preset(std::string_view preset);

// Key suggestion used in unknown-key diagnostics; empty when nothing is close.
std::string nearest_key(std::string_view key, const std::vector<std::string>& candidates);

}  // namespace sab_cli
