#include "app.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <future>
#include <json.hpp>
#include <set>
#include <sstream>

#include "config.hpp"
#include "runner.hpp"

namespace sab_cli {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Config for `target` (an experiment or a preset name) from an optional
// config document.
ExperimentConfig load(const std::string& target, const std::optional<std::string>& config_path) {
  if (is_preset(target)) {
    nlohmann::json doc = nlohmann::json::object();
    if (config_path) {
      try {
        doc = nlohmann::json::parse(read_file(*config_path));
      } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("malformed document: ") + e.what());
      }
      if (!doc.is_object()) throw ConfigError("config must be a JSON object");
      if (doc.contains("preset") && doc["preset"] != target)
        throw ConfigError("preset: config names '" + doc["preset"].dump() +
                          "' but the command line asks for '" + target + "'");
    }
    doc["preset"] = target;
    return parse_config(doc.dump());
  }

  const auto exp = experiment_from_name(target);
  if (!exp) {
    std::vector<std::string> names = preset_names();
    for (const char* n : {"CircuitDynamics", "PotentialLandscape", "ElectricSidebands",
                          "FloquetDecompose", "GravRedshift", "BulkPhase"})
      names.emplace_back(n);
    std::string msg = "unknown experiment or preset '" + target + "'";
    if (auto s = nearest_key(target, names); !s.empty()) msg += "; did you mean '" + s + "'?";
    throw ConfigError(msg);
  }
  const std::string text = config_path ? read_file(*config_path) : std::string();
  ExperimentConfig cfg = parse_config(text, exp);
  if (cfg.experiment != *exp)
    throw ConfigError("experiment: config describes " + std::string(experiment_name(cfg.experiment)) +
                      " but the command line asks for " + std::string(experiment_name(*exp)));
  return cfg;
}

int report(const RunResult& r, std::ostream& out, std::ostream& err) {
  if (r.exit_code == kExitOk)
    out << r.summary << '\n';
  else
    err << "scalar-ab: error: " << r.diagnostic << '\n';
  return r.exit_code;
}

int sweep(const std::vector<std::string>& configs, std::ostream& out, std::ostream& err) {
  if (configs.empty()) throw ConfigError("sweep: give at least one --config");
  std::vector<ExperimentConfig> cfgs;
  std::set<std::string> paths;
  for (const auto& path : configs) {
    try {
      cfgs.push_back(parse_config(read_file(path)));
    } catch (const ConfigError& e) {
      throw ConfigError(path + ": " + e.what());
    }
    const auto target = resolve_output_path(cfgs.back());
    if (!paths.insert(target).second)
      throw ConfigError(path + ": output path '" + target + "' is shared with another config");
  }

  std::vector<std::future<RunResult>> jobs;
  for (const auto& c : cfgs)
    jobs.push_back(std::async(std::launch::async, [&c] { return run_experiment(c); }));

  int status = kExitOk;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    RunResult r = jobs[i].get();
    if (r.exit_code != kExitOk) r.diagnostic = configs[i] + ": " + r.diagnostic;
    status = std::max(status, report(r, out, err));
  }
  return status;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Scalar Aharonov-Bohm phase and sideband simulations", "scalar-ab"};
  std::string target;
  std::vector<std::string> configs;
  std::optional<std::string> out_path;
  std::optional<std::string> format;
  std::optional<std::string> dump;

  app.add_option("target", target,
                 "experiment (CircuitDynamics, PotentialLandscape, ElectricSidebands, "
                 "FloquetDecompose, GravRedshift, BulkPhase), preset (fig3, fig4, earth-shell, "
                 "supernova-shell) or 'sweep'");
  app.add_option("--config", configs, "config file (repeat for sweep)");
  app.add_option("--out", out_path, "output file, overrides output.path");
  app.add_option("--format", format, "csv or json, overrides output.format");
  app.add_option("--dump-preset", dump, "print the config text of a preset and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "scalar-ab: error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (dump) {
      const std::string text = dump_preset(*dump);
      if (out_path) {
        std::ofstream f(*out_path, std::ios::binary | std::ios::trunc);
        if (!(f << text)) throw ConfigError("cannot write '" + *out_path + "'");
      } else {
        out << text;
      }
      return kExitOk;
    }
    if (target.empty()) throw ConfigError("missing target; run with --help for usage");
    if (target == "sweep") {
      if (out_path || format) throw ConfigError("sweep: --out and --format are per config");
      return sweep(configs, out, err);
    }
    if (configs.size() > 1) throw ConfigError("only sweep accepts several --config files");
    ExperimentConfig cfg =
        load(target, configs.empty() ? std::nullopt : std::optional<std::string>(configs[0]));
    override_output(cfg, out_path, format);
    return report(run_experiment(cfg), out, err);
  } catch (const ConfigError& e) {
    err << "scalar-ab: error: " << e.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace sab_cli
