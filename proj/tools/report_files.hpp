#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fgt/analysis.hpp"
#include "fgt/mapper.hpp"
#include "fgt/scenario.hpp"
#include "fgt/virtualsensors.hpp"

namespace fgt::tools {

/// Stamp carried by every JSON output.
struct Metadata {
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
};
Metadata metadata_for(const scenario::ScenarioConfig& config);

struct CalibrationReport {
  mapper::CalibrationOutcome outcome;
  double angular_resolution_rad = 0.0;
};

void write_calibration_files(const CalibrationReport& report, const Metadata& meta,
                             const std::filesystem::path& out_dir);

struct DecayFitRow {
  Axis axis = Axis::pitch;
  double theta0_deg = 0.0;
  bool fitted = false;
  double tau_s = 0.0;
  double f_c_hz = 0.0;
  double r_squared = 0.0;
  std::string note;  // reason when not fitted
};

void write_step_response_files(const std::vector<DecayFitRow>& rows,
                               const scenario::StepResponseSpec& spec, const Metadata& meta,
                               const std::filesystem::path& out_dir);

struct TrimRow {
  std::string label;
  double external_torque_unm = 0.0;
  Axis load_axis = Axis::roll;
  bool has_load = false;
  mapper::TrimResult result;
};

void write_sweep_files(const mapper::SweepDataset& ds, const analysis::AnalysisReport& report,
                       const std::vector<TrimRow>& trims, const Metadata& meta,
                       const std::filesystem::path& out_dir);

/// Analysis-only report (used by the report verb on an existing dataset).
void write_analysis_files(const mapper::SweepDataset& ds,
                          const analysis::AnalysisReport& report, const Metadata& meta,
                          const std::filesystem::path& out_dir);

struct LoadShiftInfo {
  double load_torque_unm = 0.0;
  double slope_implied_shift_v = 0.0;
  double reported_shift_v = 0.0;
};

void write_validation_files(const std::vector<TrimRow>& trims,
                            const std::vector<analysis::TrimCheck>& checks,
                            const LoadShiftInfo& info, const Metadata& meta,
                            const std::filesystem::path& out_dir);

/// Fit summary needed by the validate verb, parsed back from report.json.
struct ReportSummary {
  analysis::AxisFit pitch_fit;
  analysis::AxisFit roll_fit;
  AxisPair sigma_inner_unm{0.0, 0.0};
  AxisPair sigma_extreme_unm{0.0, 0.0};
};
ReportSummary read_report_summary(const std::filesystem::path& report_json);

}  // namespace fgt::tools
