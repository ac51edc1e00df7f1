#pragma once

#include <optional>
#include <string>

#include "fgt/scenario.hpp"

namespace fgt::tools {

struct CliOptions {
  std::string config_path;  // empty: built-in scenario
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<double> coupling;
  bool no_noise = false;
  bool parallel = false;
};

/// Loads the config (or the built-in scenario) and applies the flag
/// overrides.
scenario::ScenarioConfig resolve_config(const CliOptions& options);

void cmd_calibrate(const scenario::ScenarioConfig& config);
void cmd_step_response(const scenario::ScenarioConfig& config);
void cmd_sweep(const scenario::ScenarioConfig& config, bool parallel);
void cmd_validate(const scenario::ScenarioConfig& config);
void cmd_report(const scenario::ScenarioConfig& config);

}  // namespace fgt::tools
