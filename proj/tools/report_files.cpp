#include "report_files.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "fgt/csv.hpp"
#include "fgt/error.hpp"
#include "fgt/units.hpp"

namespace fgt::tools {

using nlohmann::json;

namespace {

std::string hash_hex(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "0x%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json metadata_json(const Metadata& meta) {
  return json{{"config_hash", hash_hex(meta.config_hash)}, {"seed", meta.seed}};
}

void write_json(const json& j, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ModelError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

json stiffness_json(const calibkit::StiffnessFit& fit, double resolution_rad) {
  return json{
      {"k_s_uNm_per_rad", fit.ks_unm_per_rad},
      {"k_s_uNm_per_deg", fit.ks_unm_per_rad * units::deg_to_rad(1.0)},
      {"intercept_uNm", fit.intercept_unm},
      {"r_squared", fit.r_squared},
      {"n_points", fit.n_points},
      {"resolution_uNm", fit.ks_unm_per_rad * resolution_rad},
  };
}

json axis_fit_json(const analysis::AxisFit& fit) {
  return json{{"slope_uNm_per_v", fit.slope_unm_per_v},
              {"intercept_uNm", fit.intercept_unm},
              {"r_squared", fit.r_squared},
              {"n", fit.n}};
}

json planar_json(const analysis::PlanarFit& fit) {
  return json{{"c0", fit.c0},
              {"c_pitch_per_v", fit.c_pitch},
              {"c_roll_per_v", fit.c_roll},
              {"residual_sd", fit.residual_sd}};
}

json trim_row_json(const TrimRow& row) {
  return json{{"label", row.label},
              {"external_torque_uNm", row.external_torque_unm},
              {"delta_a_v", row.result.delta_a_v},
              {"v_o_v", row.result.v_o_v},
              {"iterations", row.result.iterations},
              {"converged", row.result.converged},
              {"residual_pitch_uNm", row.result.residual_unm.pitch},
              {"residual_roll_uNm", row.result.residual_unm.roll}};
}

json check_json(const analysis::TrimCheck& c) {
  return json{{"source", c.source},
              {"axis", axis_name(c.axis)},
              {"external_torque_uNm", c.external_torque_unm},
              {"predicted_trim_v", c.predicted_trim_v},
              {"observed_trim_v", c.observed_trim_v},
              {"deviation_v", c.deviation_v},
              {"deviation_torque_uNm", c.deviation_torque_unm},
              {"deviation_sigma", c.deviation_sigma},
              {"exceeds_sigma", c.exceeds_sigma},
              {"within_tether_tolerance", c.within_tether_tolerance}};
}

json analysis_json(const analysis::AnalysisReport& report) {
  json j{
      {"pitch_fit", axis_fit_json(report.pitch_fit)},
      {"roll_fit", axis_fit_json(report.roll_fit)},
      {"planar_fits",
       json{{"pitch_torque", planar_json(report.planar_pitch)},
            {"roll_torque", planar_json(report.planar_roll)},
            {"thrust", planar_json(report.planar_thrust)}}},
      {"cross_correlation",
       json{{"roll_cmd_vs_pitch_torque", report.cross_corr.roll_cmd_vs_pitch_torque},
            {"pitch_cmd_vs_roll_torque", report.cross_corr.pitch_cmd_vs_roll_torque}}},
      {"cross_correlation_residual",
       json{{"roll_cmd_vs_pitch_torque",
             report.cross_corr_residual.roll_cmd_vs_pitch_torque},
            {"pitch_cmd_vs_roll_torque",
             report.cross_corr_residual.pitch_cmd_vs_roll_torque}}},
      {"dispersion",
       json{{"sigma_inner_uNm",
             json{{"pitch", report.dispersion.sigma_inner_unm.pitch},
                  {"roll", report.dispersion.sigma_inner_unm.roll}}},
            {"sigma_extreme_uNm",
             json{{"pitch", report.dispersion.sigma_extreme_unm.pitch},
                  {"roll", report.dispersion.sigma_extreme_unm.roll}}},
            {"n_inner", report.dispersion.n_inner},
            {"n_extreme", report.dispersion.n_extreme}}},
      {"thrust_stats",
       json{{"mean_mgf", report.thrust.mean_mgf},
            {"max_dev_fraction", report.thrust.max_dev_fraction},
            {"slope_pitch_mgf_per_v", report.thrust.slope_pitch_mgf_per_v},
            {"slope_roll_mgf_per_v", report.thrust.slope_roll_mgf_per_v}}},
  };
  json checks = json::array();
  for (const auto& c : report.trim_checks) checks.push_back(check_json(c));
  j["trim_checks"] = checks;
  return j;
}

// Trend-line scatter files plus planar residual grids, one per response.
void write_plot_files(const mapper::SweepDataset& ds,
                      const analysis::AnalysisReport& report,
                      const std::filesystem::path& out_dir) {
  {
    csv::Writer w(out_dir / "plot_pitch_torque.csv");
    w.header({"v_o_volts", "delta_a_volts", "tau_pitch_uNm", "trend_uNm", "band_lo_uNm",
              "band_hi_uNm"});
    for (const auto& p : ds.points) {
      if (p.excluded) continue;
      const double trend = report.pitch_fit.intercept_unm +
                           report.pitch_fit.slope_unm_per_v * p.v_o_volts;
      const double s = report.dispersion.sigma_inner_unm.pitch;
      w.row_numeric({p.v_o_volts, p.delta_a_volts, p.tau_pitch_unm, trend, trend - s,
                     trend + s});
    }
  }
  {
    csv::Writer w(out_dir / "plot_roll_torque.csv");
    w.header({"v_o_volts", "delta_a_volts", "tau_roll_uNm", "trend_uNm", "band_lo_uNm",
              "band_hi_uNm"});
    for (const auto& p : ds.points) {
      if (p.excluded) continue;
      const double trend = report.roll_fit.intercept_unm +
                           report.roll_fit.slope_unm_per_v * p.delta_a_volts;
      const double s = report.dispersion.sigma_inner_unm.roll;
      w.row_numeric({p.v_o_volts, p.delta_a_volts, p.tau_roll_unm, trend, trend - s,
                     trend + s});
    }
  }
  const struct {
    const char* file;
    const analysis::PlanarFit* fit;
  } planes[] = {{"plot_planar_residual_pitch.csv", &report.planar_pitch},
                {"plot_planar_residual_roll.csv", &report.planar_roll},
                {"plot_planar_residual_thrust.csv", &report.planar_thrust}};
  for (const auto& plane : planes) {
    csv::Writer w(out_dir / plane.file);
    w.header({"v_o_volts", "delta_a_volts", "residual"});
    std::size_t k = 0;
    for (const auto& p : ds.points) {
      if (p.excluded) continue;
      w.row_numeric({p.v_o_volts, p.delta_a_volts, plane.fit->residuals.at(k)});
      ++k;
    }
  }
  {
    csv::Writer w(out_dir / "plot_thrust_deviation.csv");
    w.header({"v_o_volts", "delta_a_volts", "thrust_mg", "deviation_fraction"});
    for (const auto& p : ds.points) {
      if (p.excluded) continue;
      const double dev = report.thrust.mean_mgf != 0.0
                             ? (p.thrust_mgf - report.thrust.mean_mgf) /
                                   report.thrust.mean_mgf
                             : 0.0;
      w.row_numeric({p.v_o_volts, p.delta_a_volts, p.thrust_mgf, dev});
    }
  }
}

json dataset_meta_json(const mapper::SweepDataset& ds, const Metadata& meta) {
  int excluded = 0, non_steady = 0;
  for (const auto& p : ds.points) {
    if (p.excluded) ++excluded;
    else if (!p.steady) ++non_steady;
  }
  return json{
      {"metadata", metadata_json(meta)},
      {"pitch_levels_v", ds.spec.pitch_levels_v},
      {"roll_levels_v", ds.spec.roll_levels_v},
      {"settle_duration_s", ds.spec.settle_duration_s},
      {"average_window_s", ds.spec.average_window_s},
      {"baseline_amplitude_v", ds.spec.baseline_amplitude_v},
      {"bias_voltage_v", ds.spec.bias_voltage_v},
      {"flap_frequency_hz", ds.spec.flap_frequency_hz},
      {"rail_margin_v", ds.spec.rail_margin_v},
      {"calibrated_k_s_uNm_per_rad",
       json{{"pitch", ds.calibrated_ks_unm_per_rad.pitch},
            {"roll", ds.calibrated_ks_unm_per_rad.roll}}},
      {"excluded_points", excluded},
      {"non_steady_points", non_steady},
  };
}

}  // namespace

Metadata metadata_for(const scenario::ScenarioConfig& config) {
  return Metadata{scenario::config_hash(config), config.seed};
}

void write_calibration_files(const CalibrationReport& report, const Metadata& meta,
                             const std::filesystem::path& out_dir) {
  {
    csv::Writer w(out_dir / "calibration_points.csv");
    w.header({"axis", "applied_torque_uNm", "measured_angle_rad"});
    for (const auto& p : report.outcome.points)
      w.row({axis_name(p.axis), csv::format_double(p.applied_torque_unm),
             csv::format_double(p.measured_angle_rad)});
  }
  json j{
      {"metadata", metadata_json(meta)},
      {"angular_resolution_rad", report.angular_resolution_rad},
      {"angular_resolution_deg", units::rad_to_deg(report.angular_resolution_rad)},
      {"pitch", stiffness_json(report.outcome.fit_pitch, report.angular_resolution_rad)},
      {"roll", stiffness_json(report.outcome.fit_roll, report.angular_resolution_rad)},
  };
  write_json(j, out_dir / "calibration_report.json");
}

void write_step_response_files(const std::vector<DecayFitRow>& rows,
                               const scenario::StepResponseSpec& spec, const Metadata& meta,
                               const std::filesystem::path& out_dir) {
  json fits = json::array();
  for (const auto& row : rows) {
    json r{{"axis", axis_name(row.axis)},
           {"theta0_deg", row.theta0_deg},
           {"fitted", row.fitted}};
    if (row.fitted) {
      r["tau_s"] = row.tau_s;
      r["f_c_hz"] = row.f_c_hz;
      r["r_squared"] = row.r_squared;
    } else {
      r["note"] = row.note;
    }
    fits.push_back(r);
  }
  json j{
      {"metadata", metadata_json(meta)},
      {"fits", fits},
      {"reference_time_constant_band_s", spec.reference_time_constant_band_s},
      {"reference_bandwidth_band_hz", spec.reference_bandwidth_band_hz},
      {"reference_cutoff_hz", spec.reference_cutoff_hz},
  };
  write_json(j, out_dir / "step_response_report.json");
}

void write_analysis_files(const mapper::SweepDataset& ds,
                          const analysis::AnalysisReport& report, const Metadata& meta,
                          const std::filesystem::path& out_dir) {
  json j = analysis_json(report);
  j["metadata"] = metadata_json(meta);
  j["trim_results"] = json::array();
  write_json(j, out_dir / "report.json");
  write_plot_files(ds, report, out_dir);
}

void write_sweep_files(const mapper::SweepDataset& ds, const analysis::AnalysisReport& report,
                       const std::vector<TrimRow>& trims, const Metadata& meta,
                       const std::filesystem::path& out_dir) {
  mapper::write_dataset_csv(ds, out_dir / "dataset.csv");
  write_json(dataset_meta_json(ds, meta), out_dir / "dataset_meta.json");

  json j = analysis_json(report);
  j["metadata"] = metadata_json(meta);
  json trim_rows = json::array();
  for (const auto& t : trims) trim_rows.push_back(trim_row_json(t));
  j["trim_results"] = trim_rows;
  write_json(j, out_dir / "report.json");

  write_plot_files(ds, report, out_dir);
}

void write_validation_files(const std::vector<TrimRow>& trims,
                            const std::vector<analysis::TrimCheck>& checks,
                            const LoadShiftInfo& info, const Metadata& meta,
                            const std::filesystem::path& out_dir) {
  json trim_rows = json::array();
  for (const auto& t : trims) trim_rows.push_back(trim_row_json(t));
  json check_rows = json::array();
  for (const auto& c : checks) check_rows.push_back(check_json(c));
  json j{
      {"metadata", metadata_json(meta)},
      {"trims", trim_rows},
      {"consistency", check_rows},
      {"load_shift_info",
       json{{"load_torque_uNm", info.load_torque_unm},
            {"slope_implied_shift_v", info.slope_implied_shift_v},
            {"reported_shift_v", info.reported_shift_v}}},
  };
  write_json(j, out_dir / "validation_report.json");
}

ReportSummary read_report_summary(const std::filesystem::path& report_json) {
  std::ifstream in(report_json);
  if (!in)
    throw ModelError("no sweep report at " + report_json.string() +
                     " (run the sweep command first)");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ModelError("unreadable report " + report_json.string() + ": " + e.what());
  }
  try {
    ReportSummary s;
    s.pitch_fit.slope_unm_per_v = j.at("pitch_fit").at("slope_uNm_per_v").get<double>();
    s.pitch_fit.intercept_unm = j.at("pitch_fit").at("intercept_uNm").get<double>();
    s.pitch_fit.r_squared = j.at("pitch_fit").at("r_squared").get<double>();
    s.roll_fit.slope_unm_per_v = j.at("roll_fit").at("slope_uNm_per_v").get<double>();
    s.roll_fit.intercept_unm = j.at("roll_fit").at("intercept_uNm").get<double>();
    s.roll_fit.r_squared = j.at("roll_fit").at("r_squared").get<double>();
    s.sigma_inner_unm.pitch =
        j.at("dispersion").at("sigma_inner_uNm").at("pitch").get<double>();
    s.sigma_inner_unm.roll =
        j.at("dispersion").at("sigma_inner_uNm").at("roll").get<double>();
    s.sigma_extreme_unm.pitch =
        j.at("dispersion").at("sigma_extreme_uNm").at("pitch").get<double>();
    s.sigma_extreme_unm.roll =
        j.at("dispersion").at("sigma_extreme_uNm").at("roll").get<double>();
    return s;
  } catch (const json::exception& e) {
    throw ModelError("report " + report_json.string() + " lacks fit fields: " + e.what());
  }
}

}  // namespace fgt::tools
