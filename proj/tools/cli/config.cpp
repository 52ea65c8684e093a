#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <json.hpp>
#include <limits>
#include <map>
#include <numbers>
#include <set>

namespace sab_cli {

using nlohmann::json;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

const sab_constants& constants() {
  static const sab_constants c = sab_physical_constants();
  return c;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

// ---- schema ----

enum class Kind { Real, Integer, Choice, RealArray };

struct KeySpec {
  std::string key;
  std::string base;  // key without its unit suffix
  Kind kind = Kind::Real;
  double scale = 1.0;  // config value * scale = SI value
  std::string unit;    // spelled out for diagnostics
  bool required = false;
  std::vector<std::string> choices;
};

KeySpec real(std::string base, std::string suffix, double scale, std::string unit,
             bool required = false) {
  KeySpec k;
  k.base = base;
  k.key = suffix.empty() ? base : base + "_" + suffix;
  k.scale = scale;
  k.unit = std::move(unit);
  k.required = required;
  return k;
}

KeySpec integer(std::string key, bool required = false) {
  KeySpec k;
  k.key = k.base = std::move(key);
  k.kind = Kind::Integer;
  k.unit = "integer";
  k.required = required;
  return k;
}

KeySpec choice(std::string key, std::vector<std::string> choices) {
  KeySpec k;
  k.key = k.base = std::move(key);
  k.kind = Kind::Choice;
  k.unit = "one of";
  for (const auto& c : choices) k.unit += " '" + c + "'";
  k.choices = std::move(choices);
  return k;
}

KeySpec real_array(std::string base, std::string suffix, double scale, std::string unit) {
  KeySpec k = real(std::move(base), std::move(suffix), scale, std::move(unit));
  k.kind = Kind::RealArray;
  k.unit = "array of " + k.unit;
  return k;
}

const double kFemto = 1e-15;
const double kNano = 1e-9;
const double kMicro = 1e-6;

double ghz_energy() { return constants().h * 1e9; }

std::vector<KeySpec> circuit_keys(bool dynamics) {
  std::vector<KeySpec> k = {
      real("c_sigma", "fF", kFemto, "femtofarads", dynamics),
      real("c_prime", "fF", kFemto, "femtofarads", dynamics),
      real("e_inductive", "GHz", ghz_energy(), "GHz (energy h*f)", true),
      real("e_josephson", "GHz", ghz_energy(), "GHz (energy h*f)", true),
      real("c_gate", "fF", kFemto, "femtofarads", dynamics),
      real("c_josephson", "fF", kFemto, "femtofarads"),
      real("c_sphere", "fF", kFemto, "femtofarads"),
  };
  return k;
}

std::vector<KeySpec> schema(Experiment e) {
  switch (e) {
    case Experiment::CircuitDynamics: {
      auto k = circuit_keys(true);
      const std::vector<KeySpec> more = {
          real("drive_amplitude", "uV", kMicro, "microvolts", true),
          real("drive_frequency", "MHz", kTwoPi * 1e6, "MHz (f = omega / 2 pi)", true),
          real("drive_phase", "rad", 1.0, "radians"),
          real("drive_offset", "uV", kMicro, "microvolts"),
          real("drive_on", "ns", kNano, "nanoseconds"),
          real("drive_off", "ns", kNano, "nanoseconds"),
          choice("envelope", {"instantaneous", "raised_cosine"}),
          real("ramp_periods", "", 1.0, "drive periods"),
          real("phi0", "rad", 1.0, "radians"),
          real("phi_dot0", "rad_per_ns", 1.0 / kNano, "radians per nanosecond"),
          real("t_end", "ns", kNano, "nanoseconds", true),
          integer("output_samples"),
          choice("method", {"dopri45", "rk4"}),
          real("fixed_step", "ps", 1e-12, "picoseconds"),
      };
      k.insert(k.end(), more.begin(), more.end());
      return k;
    }
    case Experiment::PotentialLandscape: {
      auto k = circuit_keys(false);
      k.push_back(real("phi_min", "rad", 1.0, "radians"));
      k.push_back(real("phi_max", "rad", 1.0, "radians"));
      k.push_back(integer("n_points"));
      return k;
    }
    case Experiment::ElectricSidebands:
      return {real("alpha", "", 1.0, "dimensionless modulation index"),
              real("potential_amplitude", "GHz", ghz_energy(), "GHz (energy h*f)"),
              real("modulation_frequency", "MHz", kTwoPi * 1e6, "MHz (f = omega / 2 pi)", true),
              real("base_energy", "GHz", ghz_energy(), "GHz (energy h*f)")};
    case Experiment::FloquetDecompose:
      return {real("potential_amplitude", "GHz", ghz_energy(), "GHz (energy h*f)"),
              real("potential_offset", "GHz", ghz_energy(), "GHz (energy h*f)"),
              real("potential_phase", "rad", 1.0, "radians"),
              real("modulation_frequency", "MHz", kTwoPi * 1e6, "MHz (f = omega / 2 pi)"),
              real_array("samples_t", "ns", kNano, "nanoseconds"),
              real_array("samples_u", "GHz", ghz_energy(), "GHz (energy h*f)"),
              real("base_energy", "GHz", ghz_energy(), "GHz (energy h*f)")};
    case Experiment::GravRedshift:
      return {real("shell_mass", "kg", 1.0, "kilograms", true),
              real("shell_modulation_mass", "kg", 1.0, "kilograms", true),
              real("shell_radius", "m", 1.0, "metres", true),
              real("shell_frequency", "Hz", kTwoPi, "Hz (f = omega / 2 pi)", true),
              real("atom_ground_mass", "kg", 1.0, "kilograms", true),
              real("transition_frequency", "Hz", constants().h, "Hz (energy h*f)", true)};
    case Experiment::BulkPhase:
      return {real("drive_amplitude", "uV", kMicro, "microvolts", true),
              real("drive_frequency", "MHz", kTwoPi * 1e6, "MHz (f = omega / 2 pi)", true),
              real("drive_phase", "rad", 1.0, "radians"),
              real("drive_offset", "uV", kMicro, "microvolts"),
              real("t_end", "ns", kNano, "nanoseconds", true),
              integer("n_steps"),
              real("cooper_pairs", "", 1.0, "count"),
              real("electrons", "", 1.0, "count"),
              real("ions", "", 1.0, "count")};
  }
  return {};
}

const std::vector<KeySpec>& numerics_schema() {
  static const std::vector<KeySpec> k = {real("rel_tol", "", 1.0, "dimensionless"),
                                         real("abs_tol", "", 1.0, "radians"),
                                         integer("truncation_n"), integer("seed")};
  return k;
}

const std::vector<std::string> kTopLevel = {"experiment", "preset", "parameters", "numerics",
                                            "output"};
const std::vector<std::string> kOutputKeys = {"path", "format"};

std::vector<std::string> keys_of(const std::vector<KeySpec>& specs) {
  std::vector<std::string> out;
  for (const auto& s : specs) out.push_back(s.key);
  return out;
}

std::string required_list(const std::vector<KeySpec>& specs) {
  std::string out;
  for (const auto& s : specs) {
    if (!s.required) continue;
    if (!out.empty()) out += ", ";
    out += s.key + " (" + s.unit + ")";
  }
  return out;
}

// ---- key suggestions ----

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

// Words that name a physical dimension, mapped to the unit suffixes used
// for that dimension.
const std::map<std::string, std::vector<std::string>>& unit_words() {
  static const std::map<std::string, std::vector<std::string>> m = {
      {"volt", {"uV"}},        {"volts", {"uV"}},       {"voltage", {"uV"}},
      {"v", {"uV"}},           {"uv", {"uV"}},          {"mv", {"uV"}},
      {"farad", {"fF"}},       {"farads", {"fF"}},      {"capacitance", {"fF"}},
      {"ff", {"fF"}},          {"pf", {"fF"}},          {"hz", {"Hz", "MHz"}},
      {"hertz", {"Hz", "MHz"}}, {"frequency", {"Hz", "MHz"}}, {"freq", {"Hz", "MHz"}},
      {"mhz", {"MHz"}},        {"ghz", {"GHz"}},        {"energy", {"GHz"}},
      {"joule", {"GHz"}},      {"joules", {"GHz"}},     {"time", {"ns"}},
      {"seconds", {"ns"}},     {"duration", {"ns"}},    {"ns", {"ns"}},
      {"phase", {"rad"}},      {"radians", {"rad"}},    {"rad", {"rad"}},
      {"mass", {"kg"}},        {"kg", {"kg"}},          {"radius", {"m"}},
      {"metres", {"m"}},       {"meters", {"m"}},
  };
  return m;
}

std::string suffix_of(const std::string& key) {
  const auto pos = key.rfind('_');
  return pos == std::string::npos ? std::string() : key.substr(pos + 1);
}

}  // namespace

std::string nearest_key(std::string_view key, const std::vector<std::string>& candidates) {
  if (candidates.empty()) return {};
  const std::string k = lower(key);

  std::vector<std::string> pool = candidates;
  if (auto it = unit_words().find(k); it != unit_words().end()) {
    std::vector<std::string> same_unit;
    for (const auto& c : candidates)
      if (std::ranges::find(it->second, suffix_of(c)) != it->second.end()) same_unit.push_back(c);
    if (!same_unit.empty()) pool = same_unit;
  }

  std::string best;
  std::size_t best_d = std::numeric_limits<std::size_t>::max();
  for (const auto& c : pool) {
    const std::string lc = lower(c);
    std::size_t d = edit_distance(k, lc);
    // A candidate containing the typed word is a strong hint.
    if (lc.find(k) != std::string::npos) d = std::min<std::size_t>(d, 1);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  // Matched by dimension only: schemas list the primary quantity of each
  // unit first.
  if (pool.size() != candidates.size()) return best_d <= 1 ? best : pool.front();
  const std::size_t limit = std::max<std::size_t>(2, k.size() / 2);
  return best_d <= limit ? best : std::string();
}

namespace {

[[noreturn]] void unknown_key(const std::string& section, const std::string& key,
                              const std::vector<std::string>& valid) {
  std::string msg = section + "." + key + ": unknown key";
  if (const auto s = nearest_key(key, valid); !s.empty()) msg += "; did you mean '" + s + "'?";
  throw ConfigError(msg);
}

// Same quantity spelled with a different unit suffix.
const KeySpec* unit_variant(const std::string& key, const std::vector<KeySpec>& specs) {
  for (const auto& s : specs) {
    if (s.key == s.base) continue;
    const std::string prefix = s.base + "_";
    if (key.size() > prefix.size() && key.compare(0, prefix.size(), prefix) == 0) return &s;
  }
  return nullptr;
}

double checked_real(const json& v, const std::string& where, const KeySpec& spec) {
  if (!v.is_number()) {
    if (v.is_string())
      throw ConfigError(where + ": malformed number '" + v.get<std::string>() +
                        "'; expected a plain JSON number in " + spec.unit);
    throw ConfigError(where + ": malformed number; expected a JSON number in " + spec.unit);
  }
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(where + ": malformed number (not finite)");
  return x;
}

long checked_integer(const json& v, const std::string& where) {
  if (v.is_number_integer()) return v.get<long>();
  if (v.is_number_float()) {
    const double x = v.get<double>();
    if (std::isfinite(x) && x == std::floor(x) && std::abs(x) < 9e15) return static_cast<long>(x);
  }
  throw ConfigError(where + ": malformed number; expected an integer");
}

// Validated section: raw JSON per key, type-checked against the schema.
class Section {
 public:
  Section(std::string name, const json& obj, const std::vector<KeySpec>& specs)
      : name_(std::move(name)), specs_(specs) {
    if (obj.is_null()) return;
    if (!obj.is_object()) throw ConfigError(name_ + ": expected an object");
    for (const auto& [key, value] : obj.items()) {
      const KeySpec* spec = find(key);
      if (!spec) {
        if (const KeySpec* v = unit_variant(key, specs_))
          throw ConfigError(name_ + "." + key + ": unit mismatch; '" + v->base +
                            "' is given in " + v->unit + " as '" + v->key + "'");
        unknown_key(name_, key, keys_of(specs_));
      }
      check(*spec, value);
      values_[key] = value;
    }
  }

  bool has(const std::string& key) const { return values_.contains(key); }

  void require_keys() const {
    for (const auto& s : specs_)
      if (s.required && !has(s.key))
        throw ConfigError(name_ + ": missing required key '" + s.key + "' (" + s.unit + ")");
  }

  double si(const std::string& key) const {
    const KeySpec& s = *find(key);
    return values_.at(key).get<double>() * s.scale;
  }
  template <class T>
  void set(const std::string& key, T& target) const {
    if (has(key)) target = static_cast<T>(si(key));
  }
  long integer(const std::string& key) const { return values_.at(key).get<long>(); }
  std::string text(const std::string& key) const { return values_.at(key).get<std::string>(); }
  std::vector<double> array_si(const std::string& key) const {
    const KeySpec& s = *find(key);
    std::vector<double> out;
    for (const auto& x : values_.at(key)) out.push_back(x.get<double>() * s.scale);
    return out;
  }
  std::string where(const std::string& key) const { return name_ + "." + key; }

 private:
  const KeySpec* find(const std::string& key) const {
    for (const auto& s : specs_)
      if (s.key == key) return &s;
    return nullptr;
  }

  void check(const KeySpec& s, const json& v) const {
    const std::string w = where(s.key);
    switch (s.kind) {
      case Kind::Real:
        checked_real(v, w, s);
        break;
      case Kind::Integer:
        if (checked_integer(v, w) < 0) throw ConfigError(w + ": must be >= 0");
        break;
      case Kind::Choice: {
        if (!v.is_string()) throw ConfigError(w + ": expected " + s.unit);
        const auto t = v.get<std::string>();
        if (std::ranges::find(s.choices, t) == s.choices.end())
          throw ConfigError(w + ": '" + t + "' is not " + s.unit);
        break;
      }
      case Kind::RealArray:
        if (!v.is_array()) throw ConfigError(w + ": expected an " + s.unit);
        for (const auto& x : v) checked_real(x, w, s);
        break;
    }
  }

  std::string name_;
  const std::vector<KeySpec>& specs_;
  std::map<std::string, json> values_;
};

sab_circuit_elements fig3_elements_or_throw() {
  sab_circuit_scenario s;
  if (sab_preset_fig3(&s) != SAB_OK) throw ConfigError(sab_last_error());
  return s.elements;
}

double inductance_from_energy(double e_l) {
  const double phi0r = constants().hbar / (2.0 * constants().e_charge);
  return e_l == 0.0 ? kInf : phi0r * phi0r / e_l;
}

double energy_from_inductance(double l) {
  const double phi0r = constants().hbar / (2.0 * constants().e_charge);
  return std::isinf(l) ? 0.0 : phi0r * phi0r / l;
}

void apply_circuit(const Section& p, sab_circuit_elements& e) {
  p.set("c_sigma_fF", e.c_sigma_F);
  p.set("c_prime_fF", e.c_prime_F);
  if (p.has("e_inductive_GHz")) {
    const double el = p.si("e_inductive_GHz");
    if (el < 0.0) throw ConfigError(p.where("e_inductive_GHz") + ": must be >= 0");
    e.inductance_H = inductance_from_energy(el);
  }
  p.set("e_josephson_GHz", e.e_josephson_J);
  p.set("c_gate_fF", e.c_gate_F);
  p.set("c_josephson_fF", e.c_josephson_F);
  p.set("c_sphere_fF", e.c_sphere_F);
}

// ---- presets ----

CircuitDynamicsParams preset_fig3() {
  sab_circuit_scenario s;
  if (sab_preset_fig3(&s) != SAB_OK) throw ConfigError(sab_last_error());
  CircuitDynamicsParams p;
  p.elements = s.elements;
  p.drive_amplitude_V = s.drive_amplitude_V;
  p.drive_omega = s.drive_omega;
  p.drive_phase0 = s.drive_phase0;
  p.envelope = s.envelope;
  p.t_end = s.t_end;
  p.output_samples = s.output_samples;
  return p;
}

LandscapeParams preset_fig4() {
  LandscapeParams p;
  double range = 0.0;
  if (sab_preset_fig4(&p.elements, &range) != SAB_OK) throw ConfigError(sab_last_error());
  p.phi_lo = -range;
  p.phi_hi = range;
  return p;
}

GravParams preset_shell(bool supernova) {
  sab_shell shell;
  sab_atom atom;
  const sab_status st = supernova ? sab_preset_supernova(&shell, &atom)
                                  : sab_preset_earth(&shell, &atom);
  if (st != SAB_OK) throw ConfigError(sab_last_error());
  return {shell, atom.rest_mass_i_kg, atom.energy_f_J - atom.energy_i_J};
}

Parameters preset_parameters(std::string_view name) {
  if (name == "fig3") return preset_fig3();
  if (name == "fig4") return preset_fig4();
  if (name == "earth-shell") return preset_shell(false);
  if (name == "supernova-shell") return preset_shell(true);
  throw ConfigError("unknown preset '" + std::string(name) + "'");
}

Parameters default_parameters(Experiment e) {
  switch (e) {
    case Experiment::CircuitDynamics: {
      CircuitDynamicsParams p;
      const auto fig3 = fig3_elements_or_throw();
      p.elements.c_josephson_F = fig3.c_josephson_F;
      p.elements.c_sphere_F = fig3.c_sphere_F;
      p.drive_phase0 = -0.5 * std::numbers::pi;
      p.envelope = {0.0, kInf, 0.0, SAB_ENVELOPE_INSTANTANEOUS};
      return p;
    }
    case Experiment::PotentialLandscape: {
      LandscapeParams p;
      // Capacitances only enter the harmonic level estimate.
      p.elements = fig3_elements_or_throw();
      p.phi_lo = -4.0 * std::numbers::pi;
      p.phi_hi = 4.0 * std::numbers::pi;
      return p;
    }
    case Experiment::ElectricSidebands: return SidebandParams{};
    case Experiment::FloquetDecompose: return FloquetParams{};
    case Experiment::GravRedshift: return GravParams{};
    case Experiment::BulkPhase: {
      BulkPhaseParams p;
      p.drive_phase0 = -0.5 * std::numbers::pi;
      return p;
    }
  }
  return SidebandParams{};
}

// ---- per-experiment assembly ----

double envelope_ramp_periods(const CircuitDynamicsParams& p) {
  if (p.envelope.shape == SAB_ENVELOPE_INSTANTANEOUS || p.drive_omega <= 0.0) return 5.0;
  return p.envelope.ramp * p.drive_omega / kTwoPi;
}

void build(const Section& s, CircuitDynamicsParams& p) {
  apply_circuit(s, p.elements);
  double ramp_periods = envelope_ramp_periods(p);
  s.set("drive_amplitude_uV", p.drive_amplitude_V);
  s.set("drive_frequency_MHz", p.drive_omega);
  s.set("drive_phase_rad", p.drive_phase0);
  s.set("drive_offset_uV", p.drive_offset_V);
  s.set("drive_on_ns", p.envelope.on);
  s.set("drive_off_ns", p.envelope.off);
  if (s.has("envelope"))
    p.envelope.shape = s.text("envelope") == "instantaneous" ? SAB_ENVELOPE_INSTANTANEOUS
                                                           : SAB_ENVELOPE_RAISED_COSINE;
  s.set("ramp_periods", ramp_periods);
  s.set("phi0_rad", p.phi0);
  s.set("phi_dot0_rad_per_ns", p.phi_dot0);
  s.set("t_end_ns", p.t_end);
  if (s.has("output_samples")) p.output_samples = static_cast<std::size_t>(s.integer("output_samples"));
  if (s.has("method")) p.method = s.text("method") == "rk4" ? SAB_METHOD_RK4 : SAB_METHOD_DOPRI45;
  s.set("fixed_step_ps", p.fixed_step);

  if (!(p.drive_omega > 0.0)) throw ConfigError(s.where("drive_frequency_MHz") + ": must be > 0");
  if (!(p.t_end > 0.0)) throw ConfigError(s.where("t_end_ns") + ": must be > 0");
  if (p.output_samples == 1) throw ConfigError(s.where("output_samples") + ": must be 0 or >= 2");
  if (p.method == SAB_METHOD_RK4 && !(p.fixed_step > 0.0))
    throw ConfigError(s.where("fixed_step_ps") + ": required (> 0) with method 'rk4'");
  if (ramp_periods < 0.0) throw ConfigError(s.where("ramp_periods") + ": must be >= 0");
  sab_envelope env;
  if (sab_envelope_window(p.envelope.on, p.envelope.off, kTwoPi / p.drive_omega, p.envelope.shape,
                          ramp_periods, &env) != SAB_OK)
    throw ConfigError("parameters: drive window: " + std::string(sab_last_error()));
  p.envelope = env;
}

void build(const Section& s, LandscapeParams& p) {
  apply_circuit(s, p.elements);
  s.set("phi_min_rad", p.phi_lo);
  s.set("phi_max_rad", p.phi_hi);
  if (s.has("n_points")) p.n_points = static_cast<std::size_t>(s.integer("n_points"));
  if (!(p.phi_hi > p.phi_lo)) throw ConfigError(s.where("phi_max_rad") + ": must exceed phi_min_rad");
  if (p.n_points < 3) throw ConfigError(s.where("n_points") + ": must be >= 3");
}

void build(const Section& s, SidebandParams& p) {
  s.set("modulation_frequency_MHz", p.omega);
  s.set("base_energy_GHz", p.base_energy);
  const bool a = s.has("alpha");
  const bool u = s.has("potential_amplitude_GHz");
  if (a == u)
    throw ConfigError(
        "parameters: give exactly one of 'alpha' (dimensionless) or "
        "'potential_amplitude_GHz' (GHz, energy h*f)");
  if (!(p.omega > 0.0)) throw ConfigError(s.where("modulation_frequency_MHz") + ": must be > 0");
  p.alpha = a ? s.si("alpha") : s.si("potential_amplitude_GHz") / (constants().hbar * p.omega);
}

void build(const Section& s, FloquetParams& p) {
  s.set("base_energy_GHz", p.base_energy);
  const bool sampled = s.has("samples_t_ns") || s.has("samples_u_GHz");
  const bool sinusoid = s.has("potential_amplitude_GHz") || s.has("modulation_frequency_MHz") ||
                        s.has("potential_offset_GHz") || s.has("potential_phase_rad");
  if (sampled == sinusoid)
    throw ConfigError(
        "parameters: give either a sinusoid (potential_amplitude_GHz, modulation_frequency_MHz) "
        "or samples (samples_t_ns, samples_u_GHz)");
  p.sampled = sampled;
  if (sampled) {
    if (!s.has("samples_t_ns") || !s.has("samples_u_GHz"))
      throw ConfigError("parameters: samples need both 'samples_t_ns' and 'samples_u_GHz'");
    p.t = s.array_si("samples_t_ns");
    p.u = s.array_si("samples_u_GHz");
    if (p.t.size() != p.u.size())
      throw ConfigError("parameters.samples_u_GHz: length differs from samples_t_ns");
    return;
  }
  for (const char* k : {"potential_amplitude_GHz", "modulation_frequency_MHz"})
    if (!s.has(k)) throw ConfigError(std::string("parameters: missing required key '") + k + "'");
  p.amplitude_J = s.si("potential_amplitude_GHz");
  p.omega = s.si("modulation_frequency_MHz");
  s.set("potential_offset_GHz", p.offset_J);
  s.set("potential_phase_rad", p.phase0);
}

void build(const Section& s, GravParams& p) {
  s.set("shell_mass_kg", p.shell.m0_kg);
  s.set("shell_modulation_mass_kg", p.shell.m1_kg);
  s.set("shell_radius_m", p.shell.radius_m);
  s.set("shell_frequency_Hz", p.shell.omega);
  s.set("atom_ground_mass_kg", p.atom_ground_mass);
  s.set("transition_frequency_Hz", p.transition_energy);
}

void build(const Section& s, BulkPhaseParams& p) {
  s.set("drive_amplitude_uV", p.drive_amplitude_V);
  s.set("drive_frequency_MHz", p.drive_omega);
  s.set("drive_phase_rad", p.drive_phase0);
  s.set("drive_offset_uV", p.drive_offset_V);
  s.set("t_end_ns", p.t_end);
  if (s.has("n_steps")) p.n_steps = static_cast<std::size_t>(s.integer("n_steps"));
  s.set("cooper_pairs", p.cooper_pairs);
  s.set("electrons", p.electrons);
  s.set("ions", p.ions);
  if (!(p.drive_omega > 0.0)) throw ConfigError(s.where("drive_frequency_MHz") + ": must be > 0");
  if (!(p.t_end > 0.0)) throw ConfigError(s.where("t_end_ns") + ": must be > 0");
  if (p.n_steps < 1) throw ConfigError(s.where("n_steps") + ": must be >= 1");
}

OutputFormat default_format(Experiment e) {
  return e == Experiment::CircuitDynamics || e == Experiment::BulkPhase ? OutputFormat::Csv
                                                                         : OutputFormat::Json;
}

bool format_supported(Experiment e, OutputFormat f) {
  switch (e) {
    case Experiment::CircuitDynamics: return true;
    case Experiment::BulkPhase: return f == OutputFormat::Csv;
    default: return f == OutputFormat::Json;
  }
}

void check_format(const ExperimentConfig& cfg) {
  if (!format_supported(cfg.experiment, cfg.output.format))
    throw ConfigError("output.format: " + std::string(experiment_name(cfg.experiment)) +
                      " does not write " +
                      (cfg.output.format == OutputFormat::Csv ? "csv" : "json"));
}

std::string all_experiment_names() {
  std::string out;
  for (auto e : {Experiment::CircuitDynamics, Experiment::PotentialLandscape,
                 Experiment::ElectricSidebands, Experiment::FloquetDecompose,
                 Experiment::GravRedshift, Experiment::BulkPhase}) {
    if (!out.empty()) out += ", ";
    out += experiment_name(e);
  }
  return out;
}

[[noreturn]] void empty_document(std::optional<Experiment> e) {
  std::string msg = "empty configuration; required keys: experiment (one of " +
                    all_experiment_names() + "), parameters";
  if (e) msg += "; " + std::string(experiment_name(*e)) + " parameters: " +
                required_list(schema(*e));
  msg += " (or 'preset', one of fig3, fig4, earth-shell, supernova-shell)";
  throw ConfigError(msg);
}

bool blank(std::string_view text) {
  return std::ranges::all_of(text, [](unsigned char c) { return std::isspace(c) != 0; });
}

}  // namespace

std::string_view experiment_name(Experiment e) {
  switch (e) {
    case Experiment::CircuitDynamics: return "CircuitDynamics";
    case Experiment::PotentialLandscape: return "PotentialLandscape";
    case Experiment::ElectricSidebands: return "ElectricSidebands";
    case Experiment::FloquetDecompose: return "FloquetDecompose";
    case Experiment::GravRedshift: return "GravRedshift";
    case Experiment::BulkPhase: return "BulkPhase";
  }
  return "?";
}

std::optional<Experiment> experiment_from_name(std::string_view name) {
  std::string squashed;
  for (char c : name)
    if (c != '-' && c != '_') squashed += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  for (auto e : {Experiment::CircuitDynamics, Experiment::PotentialLandscape,
                 Experiment::ElectricSidebands, Experiment::FloquetDecompose,
                 Experiment::GravRedshift, Experiment::BulkPhase})
    if (lower(experiment_name(e)) == squashed) return e;
  return std::nullopt;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"fig3", "fig4", "earth-shell", "supernova-shell"};
  return names;
}

bool is_preset(std::string_view name) {
  return std::ranges::find(preset_names(), name) != preset_names().end();
}

Experiment preset_experiment(std::string_view preset) {
  if (preset == "fig3") return Experiment::CircuitDynamics;
  if (preset == "fig4") return Experiment::PotentialLandscape;
  if (preset == "earth-shell" || preset == "supernova-shell") return Experiment::GravRedshift;
  std::string msg = "unknown preset '" + std::string(preset) + "'";
  if (auto s = nearest_key(preset, preset_names()); !s.empty()) msg += "; did you mean '" + s + "'?";
  throw ConfigError(msg);
}

ExperimentConfig parse_config(std::string_view text, std::optional<Experiment> fallback) {
  if (blank(text)) empty_document(fallback);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed document: ") + e.what());
  }
  if (doc.is_null() || (doc.is_object() && doc.empty())) empty_document(fallback);
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  for (const auto& [key, value] : doc.items())
    if (std::ranges::find(kTopLevel, key) == kTopLevel.end()) unknown_key("config", key, kTopLevel);

  ExperimentConfig cfg;
  std::optional<Experiment> exp = fallback;
  if (doc.contains("experiment")) {
    if (!doc["experiment"].is_string()) throw ConfigError("experiment: expected a string");
    const auto name = doc["experiment"].get<std::string>();
    exp = experiment_from_name(name);
    if (!exp) {
      std::vector<std::string> names;
      for (auto e : {Experiment::CircuitDynamics, Experiment::PotentialLandscape,
                     Experiment::ElectricSidebands, Experiment::FloquetDecompose,
                     Experiment::GravRedshift, Experiment::BulkPhase})
        names.emplace_back(experiment_name(e));
      std::string msg = "experiment: unknown experiment '" + name + "'";
      if (auto s = nearest_key(name, names); !s.empty()) msg += "; did you mean '" + s + "'?";
      throw ConfigError(msg + " (valid: " + all_experiment_names() + ")");
    }
  }
  if (doc.contains("preset")) {
    if (!doc["preset"].is_string()) throw ConfigError("preset: expected a string");
    cfg.preset = doc["preset"].get<std::string>();
    const Experiment pe = preset_experiment(cfg.preset);
    if (exp && *exp != pe)
      throw ConfigError("preset: '" + cfg.preset + "' belongs to experiment " +
                        std::string(experiment_name(pe)) + ", not " +
                        std::string(experiment_name(*exp)));
    exp = pe;
  }
  if (!exp)
    throw ConfigError("config: missing required key 'experiment' (one of " +
                      all_experiment_names() + ")");
  cfg.experiment = *exp;

  const auto specs = schema(cfg.experiment);
  const json params = doc.contains("parameters") ? doc["parameters"] : json();
  if (cfg.preset.empty() && params.is_null())
    throw ConfigError("config: missing required key 'parameters'; " +
                      std::string(experiment_name(cfg.experiment)) +
                      " requires: " + required_list(specs));
  const Section section("parameters", params, specs);
  if (cfg.preset.empty()) section.require_keys();

  cfg.parameters = cfg.preset.empty() ? default_parameters(cfg.experiment)
                                      : preset_parameters(cfg.preset);
  std::visit([&](auto& p) { build(section, p); }, cfg.parameters);

  const json num = doc.contains("numerics") ? doc["numerics"] : json();
  const Section numerics("numerics", num, numerics_schema());
  numerics.set("rel_tol", cfg.numerics.rel_tol);
  numerics.set("abs_tol", cfg.numerics.abs_tol);
  if (numerics.has("truncation_n")) {
    const long n = numerics.integer("truncation_n");
    if (n > (1 << 20)) throw ConfigError("numerics.truncation_n: too large");
    cfg.numerics.truncation_n = static_cast<int>(n);
  }
  if (numerics.has("seed")) cfg.numerics.seed = numerics.integer("seed");
  if (!(cfg.numerics.rel_tol > 0.0)) throw ConfigError("numerics.rel_tol: must be > 0");
  if (!(cfg.numerics.abs_tol > 0.0)) throw ConfigError("numerics.abs_tol: must be > 0");

  cfg.output.format = default_format(cfg.experiment);
  if (doc.contains("output")) {
    const json& out = doc["output"];
    if (!out.is_object()) throw ConfigError("output: expected an object");
    for (const auto& [key, value] : out.items())
      if (std::ranges::find(kOutputKeys, key) == kOutputKeys.end())
        unknown_key("output", key, kOutputKeys);
    if (out.contains("path")) {
      if (!out["path"].is_string() || out["path"].get<std::string>().empty())
        throw ConfigError("output.path: expected a non-empty string");
      cfg.output.path = out["path"].get<std::string>();
    }
    if (out.contains("format")) {
      const auto f = out["format"].is_string() ? lower(out["format"].get<std::string>()) : "";
      if (f == "csv") cfg.output.format = OutputFormat::Csv;
      else if (f == "json") cfg.output.format = OutputFormat::Json;
      else throw ConfigError("output.format: expected 'csv' or 'json'");
    }
  }
  check_format(cfg);
  return cfg;
}

void override_output(ExperimentConfig& cfg, const std::optional<std::string>& path,
                     const std::optional<std::string>& format) {
  if (path) {
    if (path->empty()) throw ConfigError("--out: expected a non-empty path");
    cfg.output.path = *path;
  }
  if (format) {
    const auto f = lower(*format);
    if (f == "csv") cfg.output.format = OutputFormat::Csv;
    else if (f == "json") cfg.output.format = OutputFormat::Json;
    else throw ConfigError("--format: expected 'csv' or 'json'");
  }
  check_format(cfg);
}

namespace {

// Preset values pass through unit conversions; 15 digits hide the last-bit
// noise (1000 fF rather than 999.9999999999999 fF).
double tidy(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return std::strtod(buf, nullptr);
}

json tidy_all(json j) {
  for (auto& [k, v] : j.items())
    if (v.is_number_float()) v = tidy(v.get<double>());
  return j;
}

json circuit_json(const sab_circuit_elements& e) {
  const double g = ghz_energy();
  return {{"c_sigma_fF", e.c_sigma_F / kFemto},
          {"c_prime_fF", e.c_prime_F / kFemto},
          {"e_inductive_GHz", energy_from_inductance(e.inductance_H) / g},
          {"e_josephson_GHz", e.e_josephson_J / g},
          {"c_gate_fF", e.c_gate_F / kFemto},
          {"c_josephson_fF", e.c_josephson_F / kFemto},
          {"c_sphere_fF", e.c_sphere_F / kFemto}};
}

json preset_parameters_json(const Parameters& params) {
  if (const auto* p = std::get_if<CircuitDynamicsParams>(&params)) {
    json j = circuit_json(p->elements);
    j["drive_amplitude_uV"] = p->drive_amplitude_V / kMicro;
    j["drive_frequency_MHz"] = p->drive_omega / (kTwoPi * 1e6);
    j["drive_phase_rad"] = p->drive_phase0;
    j["drive_on_ns"] = p->envelope.on / kNano;
    j["drive_off_ns"] = p->envelope.off / kNano;
    j["envelope"] = p->envelope.shape == SAB_ENVELOPE_INSTANTANEOUS ? "instantaneous"
                                                                    : "raised_cosine";
    j["t_end_ns"] = p->t_end / kNano;
    j["output_samples"] = p->output_samples;
    return j;
  }
  if (const auto* p = std::get_if<LandscapeParams>(&params)) {
    json j = circuit_json(p->elements);
    j["phi_min_rad"] = p->phi_lo;
    j["phi_max_rad"] = p->phi_hi;
    j["n_points"] = p->n_points;
    return j;
  }
  const auto& g = std::get<GravParams>(params);
  return {{"shell_mass_kg", g.shell.m0_kg},
          {"shell_modulation_mass_kg", g.shell.m1_kg},
          {"shell_radius_m", g.shell.radius_m},
          {"shell_frequency_Hz", g.shell.omega / kTwoPi},
          {"atom_ground_mass_kg", g.atom_ground_mass},
          {"transition_frequency_Hz", g.transition_energy / constants().h}};
}

}  // namespace

std::string dump_preset(std::string_view preset) {
  const Experiment e = preset_experiment(preset);
  const Parameters params = preset_parameters(preset);
  const std::string name(preset);
  json doc = {{"experiment", std::string(experiment_name(e))},
              {"parameters", tidy_all(preset_parameters_json(params))},
              {"numerics", {{"rel_tol", 1e-12}, {"abs_tol", 1e-14}, {"truncation_n", 0}}},
              {"output",
               {{"path", name + (default_format(e) == OutputFormat::Csv ? ".csv" : ".json")},
                {"format", default_format(e) == OutputFormat::Csv ? "csv" : "json"}}}};
  return doc.dump(2) + "\n";
}

}  // namespace sab_cli
