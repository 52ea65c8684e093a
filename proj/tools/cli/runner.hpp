#pragma once

#include <string>

#include "config.hpp"

namespace sab_cli {

enum ExitCode { kExitOk = 0, kExitConfig = 1, kExitNumeric = 2 };

struct RunResult {
  int exit_code = kExitOk;
  std::string summary;     // one line on success
  std::string diagnostic;  // on failure
  std::string output_path;
};

// Output path when the config does not declare one.
std::string resolve_output_path(const ExperimentConfig& cfg);

RunResult run_experiment(const ExperimentConfig& cfg);

}  // namespace sab_cli
