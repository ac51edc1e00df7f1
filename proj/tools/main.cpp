#include <cstdio>
#include <exception>

#include <CLI11.hpp>

#include "commands.hpp"
#include "fgt/error.hpp"

namespace {

// Exit codes: 0 success, 2 config/usage error, 3 runtime or model error.
constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

void add_common_options(CLI::App* cmd, fgt::tools::CliOptions& options) {
  cmd->add_option("--config", options.config_path,
                  "Scenario JSON (defaults to the built-in scenario)");
  cmd->add_option("--seed", options.seed, "Override the scenario seed");
  cmd->add_option("--out", options.out_dir, "Output directory");
  cmd->add_option("--coupling", options.coupling,
                  "Override both cross-coupling coefficients (uNm/V)");
  cmd->add_flag("--no-noise", options.no_noise, "Zero all sensor and plant noise");
  cmd->add_flag("--parallel", options.parallel,
                "Measure grid points concurrently (requires zero wear drift)");
}

template <typename F>
int guarded(F&& f) {
  try {
    f();
    return kExitOk;
  } catch (const fgt::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fgt - virtual testbench for a flexured-gimbal micro force/torque sensor"};
  app.require_subcommand(1);

  fgt::tools::CliOptions options;
  CLI::App* calibrate = app.add_subcommand(
      "calibrate", "Hung-mass stiffness calibration of both gimbal axes");
  CLI::App* step = app.add_subcommand(
      "step-response", "Free-decay runs and time-constant/bandwidth fits");
  CLI::App* sweep = app.add_subcommand(
      "sweep", "Calibrate, optionally trim, run the command grid and analyze it");
  CLI::App* validate = app.add_subcommand(
      "validate", "Free-flight trims (with offset loads) against the recovered map");
  CLI::App* report = app.add_subcommand(
      "report", "Re-run the analysis over an existing dataset.csv");
  for (CLI::App* cmd : {calibrate, step, sweep, validate, report})
    add_common_options(cmd, options);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  return guarded([&] {
    const auto config = fgt::tools::resolve_config(options);
    if (calibrate->parsed()) {
      fgt::tools::cmd_calibrate(config);
    } else if (step->parsed()) {
      fgt::tools::cmd_step_response(config);
    } else if (sweep->parsed()) {
      fgt::tools::cmd_sweep(config, options.parallel);
    } else if (validate->parsed()) {
      fgt::tools::cmd_validate(config);
    } else if (report->parsed()) {
      fgt::tools::cmd_report(config);
    }
  });
}
