#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "fgt/analysis.hpp"
#include "fgt/calibkit.hpp"
#include "fgt/error.hpp"
#include "fgt/csv.hpp"
#include "fgt/units.hpp"
#include "fgt/virtualsensors.hpp"
#include "report_files.hpp"

namespace fgt::tools {

namespace fs = std::filesystem;

scenario::ScenarioConfig resolve_config(const CliOptions& options) {
  scenario::ScenarioConfig config;
  if (options.config_path.empty()) {
    config = scenario::paper_scenario();
  } else {
    if (!fs::exists(options.config_path))
      throw ConfigError("config file not found: " + options.config_path);
    config = scenario::load(options.config_path);
  }

  if (options.seed) config.seed = *options.seed;
  if (options.out_dir) config.output_dir = *options.out_dir;
  if (options.coupling) {
    for (auto& [name, fly] : config.flies) {
      fly.character.coupling_roll_to_pitch_unm_per_v = *options.coupling;
      fly.character.coupling_pitch_to_roll_unm_per_v = *options.coupling;
    }
  }
  if (options.no_noise) {
    config.mocap.marker_position_sd_mm = 0.0;
    config.balance.reading_sd_mg = 0.0;
    config.trim.observation_noise_sd_unm = 0.0;
    for (auto& [name, fly] : config.flies) {
      fly.character.inner_noise_sd_unm = AxisPair{0.0, 0.0};
      fly.character.extreme_noise_sd_unm = AxisPair{0.0, 0.0};
      fly.character.thrust_noise_sd_mgf = 0.0;
    }
  }
  config.validate();
  return config;
}

namespace {

fs::path ensure_out_dir(const scenario::ScenarioConfig& config) {
  fs::path dir = config.output_dir;
  fs::create_directories(dir);
  return dir;
}

CalibrationReport run_calibration_stage(const scenario::ScenarioConfig& config) {
  mapper::PlantBundle plant = scenario::plant_bundle(config);
  CalibrationReport report;
  report.outcome = mapper::run_calibration(plant, config.calibration.loads,
                                           config.calibration.window_s, config.seed);
  report.angular_resolution_rad = virtualsensors::angular_resolution_rad(config.mocap);
  return report;
}

void print_stiffness(const char* axis, const calibkit::StiffnessFit& fit,
                     double resolution_rad) {
  std::printf("  %-5s k_s = %.4g uNm/rad (%.4g uNm/deg), R^2 = %.6f, resolution = %.3g uNm\n",
              axis, fit.ks_unm_per_rad, fit.ks_unm_per_rad * units::deg_to_rad(1.0),
              fit.r_squared, fit.ks_unm_per_rad * resolution_rad);
}

std::vector<TrimRow> run_trims(const scenario::ScenarioConfig& config,
                               bool include_loads) {
  const auto& fir = config.active().character;
  const auto baseline = scenario::baseline_command(config);

  std::vector<TrimRow> rows;
  std::uint64_t stream = 0;

  {
    Rng rng(derive_stream(config.seed, rng_domain::kTrim, stream++));
    TrimRow row;
    row.label = "free_flight_no_load";
    row.result = mapper::trim_search(fir, baseline, std::nullopt, config.trim, 0.0, rng);
    rows.push_back(row);
  }
  if (include_loads) {
    for (const auto& load : config.validation.loads) {
      Rng rng(derive_stream(config.seed, rng_domain::kTrim, stream++));
      TrimRow row;
      const double tau = firmodel::offset_torque_unm(load);
      char label[64];
      std::snprintf(label, sizeof(label), "%s_load_%+.2fuNm", axis_name(load.axis), tau);
      row.label = label;
      row.external_torque_unm = tau;
      row.load_axis = load.axis;
      row.has_load = true;
      row.result = mapper::trim_search(fir, baseline, load, config.trim, 0.0, rng);
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace

void cmd_calibrate(const scenario::ScenarioConfig& config) {
  const fs::path out = ensure_out_dir(config);
  const CalibrationReport report = run_calibration_stage(config);
  write_calibration_files(report, metadata_for(config), out);
  std::printf("calibration (angular resolution %.4f deg):\n",
              units::rad_to_deg(report.angular_resolution_rad));
  print_stiffness("pitch", report.outcome.fit_pitch, report.angular_resolution_rad);
  print_stiffness("roll", report.outcome.fit_roll, report.angular_resolution_rad);
  std::printf("wrote %s and %s\n", (out / "calibration_report.json").c_str(),
              (out / "calibration_points.csv").c_str());
}

void cmd_step_response(const scenario::ScenarioConfig& config) {
  const fs::path out = ensure_out_dir(config);
  std::vector<DecayFitRow> rows;

  for (Axis axis : {Axis::pitch, Axis::roll}) {
    const auto& gimbal = axis == Axis::pitch ? config.gimbal_pitch : config.gimbal_roll;
    for (double angle_deg : config.step_response.initial_angles_deg) {
      DecayFitRow row;
      row.axis = axis;
      row.theta0_deg = angle_deg;
      try {
        const auto trace = gimbalsim::step_response(gimbal, units::deg_to_rad(angle_deg),
                                                    config.step_response.duration_s,
                                                    config.step_response.dt_s);
        char name[64];
        std::snprintf(name, sizeof(name), "step_trace_%s_%gdeg.csv", axis_name(axis),
                      angle_deg);
        {
          csv::Writer w(out / name);
          w.header({"t_seconds", "theta_rad"});
          for (std::size_t i = 0; i < trace.t_s.size(); ++i)
            w.row_numeric({trace.t_s[i], trace.theta_rad[i]});
        }
        const auto fit = calibkit::fit_time_constant(trace);
        row.fitted = true;
        row.tau_s = fit.tau_s;
        row.f_c_hz = calibkit::bandwidth_hz(fit.tau_s);
        row.r_squared = fit.r_squared;
      } catch (const ModelError& e) {
        row.fitted = false;
        row.note = e.what();
      }
      rows.push_back(row);
    }
  }

  write_step_response_files(rows, config.step_response, metadata_for(config), out);
  std::printf("step response decays:\n");
  for (const auto& row : rows) {
    if (row.fitted)
      std::printf("  %-5s theta0 %+5.1f deg: tau = %.3f s, f_c = %.4f Hz\n",
                  axis_name(row.axis), row.theta0_deg, row.tau_s, row.f_c_hz);
    else
      std::printf("  %-5s theta0 %+5.1f deg: no fit (%s)\n", axis_name(row.axis),
                  row.theta0_deg, row.note.c_str());
  }
  std::printf("reference: tau band [%g, %g] s, bandwidth band [%g, %g] Hz, cutoff %g Hz\n",
              config.step_response.reference_time_constant_band_s[0],
              config.step_response.reference_time_constant_band_s[1],
              config.step_response.reference_bandwidth_band_hz[0],
              config.step_response.reference_bandwidth_band_hz[1],
              config.step_response.reference_cutoff_hz);
}

void cmd_sweep(const scenario::ScenarioConfig& config, bool parallel) {
  const fs::path out = ensure_out_dir(config);
  const Metadata meta = metadata_for(config);

  const CalibrationReport calibration = run_calibration_stage(config);
  write_calibration_files(calibration, meta, out);

  mapper::PlantBundle plant = scenario::plant_bundle(config);
  plant.calibrated_ks_unm_per_rad =
      AxisPair{calibration.outcome.fit_pitch.ks_unm_per_rad,
               calibration.outcome.fit_roll.ks_unm_per_rad};

  std::vector<TrimRow> trims;
  std::vector<analysis::TrimObservation> observations;
  if (config.trim_before_sweep) {
    trims = run_trims(config, /*include_loads=*/false);
    for (const auto& row : trims)
      observations.push_back(analysis::TrimObservation{row.label, row.result, std::nullopt});
  }

  mapper::SweepSpec spec = config.sweep;
  spec.baseline_amplitude_v = config.active().baseline_amplitude_v;
  const auto dataset = mapper::run_grid(plant, spec, config.seed, parallel);
  const auto report =
      analysis::analyze(dataset, observations, config.validation.tether_tolerance_unm);

  write_sweep_files(dataset, report, trims, meta, out);

  std::printf("sweep of %zu points (%d excluded):\n", dataset.points.size(),
              static_cast<int>(dataset.points.size()) - report.pitch_fit.n);
  std::printf("  pitch: slope %.4f uNm/V, R^2 = %.4f\n", report.pitch_fit.slope_unm_per_v,
              report.pitch_fit.r_squared);
  std::printf("  roll:  slope %.4f uNm/V, R^2 = %.4f\n", report.roll_fit.slope_unm_per_v,
              report.roll_fit.r_squared);
  std::printf("  cross-correlation: roll_cmd-pitch_tau %.4f, pitch_cmd-roll_tau %.4f\n",
              report.cross_corr.roll_cmd_vs_pitch_torque,
              report.cross_corr.pitch_cmd_vs_roll_torque);
  std::printf("  sigma inner (pitch/roll): %.3f / %.3f uNm; extreme: %.3f / %.3f uNm\n",
              report.dispersion.sigma_inner_unm.pitch,
              report.dispersion.sigma_inner_unm.roll,
              report.dispersion.sigma_extreme_unm.pitch,
              report.dispersion.sigma_extreme_unm.roll);
  std::printf("  thrust: mean %.1f mgf, max deviation %.2f%%, slopes %.3f / %.3f mgf/V\n",
              report.thrust.mean_mgf, 100.0 * report.thrust.max_dev_fraction,
              report.thrust.slope_pitch_mgf_per_v, report.thrust.slope_roll_mgf_per_v);
  for (const auto& t : trims)
    std::printf("  trim %s: dA = %+.1f V, V_o = %+.1f V (%d iterations)\n",
                t.label.c_str(), t.result.delta_a_v, t.result.v_o_v, t.result.iterations);
  std::printf("wrote dataset.csv, report.json and plot data under %s\n", out.c_str());
}

void cmd_validate(const scenario::ScenarioConfig& config) {
  const fs::path out = ensure_out_dir(config);
  const auto summary = read_report_summary(out / "report.json");

  const auto trims = run_trims(config, /*include_loads=*/true);

  std::vector<analysis::TrimObservation> observations;
  for (const auto& row : trims) {
    analysis::TrimObservation obs;
    obs.label = row.label;
    obs.trim = row.result;
    if (row.has_load) {
      for (const auto& load : config.validation.loads)
        if (load.axis == row.load_axis) obs.load = load;
    }
    observations.push_back(obs);
  }

  analysis::DispersionStats dispersion;
  dispersion.sigma_inner_unm = summary.sigma_inner_unm;
  dispersion.sigma_extreme_unm = summary.sigma_extreme_unm;
  const auto checks =
      analysis::trim_consistency(summary.pitch_fit, summary.roll_fit, dispersion,
                                 observations, config.validation.tether_tolerance_unm);

  LoadShiftInfo info;
  for (const auto& load : config.validation.loads) {
    if (load.axis != Axis::roll) continue;
    info.load_torque_unm = firmodel::offset_torque_unm(load);
    info.slope_implied_shift_v = -info.load_torque_unm / summary.roll_fit.slope_unm_per_v;
    info.reported_shift_v = config.validation.reported_load_trim_shift_v;
  }

  write_validation_files(trims, checks, info, metadata_for(config), out);

  std::printf("trim consistency against the recovered map:\n");
  std::printf("  %-28s %-6s %10s %10s %10s %8s\n", "source", "axis", "predicted",
              "observed", "dev_uNm", "dev_sig");
  for (const auto& c : checks) {
    std::printf("  %-28s %-6s %9.2fV %9.2fV %10.3f %8.2f%s\n", c.source.c_str(),
                axis_name(c.axis), c.predicted_trim_v, c.observed_trim_v,
                c.deviation_torque_unm, c.deviation_sigma,
                c.exceeds_sigma ? (c.within_tether_tolerance ? " [> sigma, within tether]"
                                                             : " [> sigma]")
                                : "");
  }
  if (info.load_torque_unm != 0.0) {
    std::printf(
        "info: %+0.2f uNm roll load implies a %+.1f V trim shift at the recovered slope; "
        "the bench reported %+.1f V\n",
        info.load_torque_unm, info.slope_implied_shift_v, info.reported_shift_v);
  }
  std::printf("wrote %s\n", (out / "validation_report.json").c_str());
}

void cmd_report(const scenario::ScenarioConfig& config) {
  const fs::path out = ensure_out_dir(config);
  const fs::path dataset_path = out / "dataset.csv";
  if (!fs::exists(dataset_path))
    throw ModelError("no dataset at " + dataset_path.string() +
                     " (run the sweep command first)");
  const auto dataset = mapper::read_dataset_csv(dataset_path);
  const auto report =
      analysis::analyze(dataset, {}, config.validation.tether_tolerance_unm);
  write_analysis_files(dataset, report, metadata_for(config), out);
  std::printf("re-analyzed %zu dataset rows; wrote report.json and plot data under %s\n",
              dataset.points.size(), out.c_str());
}

}  // namespace fgt::tools
