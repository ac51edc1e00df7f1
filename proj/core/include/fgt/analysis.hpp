#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fgt/firmodel.hpp"
#include "fgt/mapper.hpp"
#include "fgt/types.hpp"

namespace fgt::analysis {

struct AxisFit {
  double slope_unm_per_v = 0.0;
  double intercept_unm = 0.0;
  double r_squared = 0.0;
  int n = 0;
};

enum class Response { pitch_torque, roll_torque, thrust };

struct PlanarFit {
  double c0 = 0.0;       // value at zero command, response units
  double c_pitch = 0.0;  // per volt of V_o
  double c_roll = 0.0;   // per volt of dA
  double residual_sd = 0.0;
  std::vector<double> residuals;  // one per non-excluded point, dataset order
};

struct CrossCorr {
  double roll_cmd_vs_pitch_torque = 0.0;
  double pitch_cmd_vs_roll_torque = 0.0;
};

struct DispersionStats {
  AxisPair sigma_inner_unm{0.0, 0.0};
  AxisPair sigma_extreme_unm{0.0, 0.0};
  int n_inner = 0;
  int n_extreme = 0;
};

struct ThrustStats {
  double mean_mgf = 0.0;
  double max_dev_fraction = 0.0;
  double slope_pitch_mgf_per_v = 0.0;
  double slope_roll_mgf_per_v = 0.0;
};

/// One trim result paired with the external torque that was hanging on the
/// vehicle while it was trimmed.
struct TrimObservation {
  std::string label;
  mapper::TrimResult trim;
  std::optional<firmodel::OffsetLoad> load;
};

struct TrimCheck {
  std::string source;
  Axis axis = Axis::roll;
  double external_torque_unm = 0.0;
  double predicted_trim_v = 0.0;
  double observed_trim_v = 0.0;
  double deviation_v = 0.0;
  double deviation_torque_unm = 0.0;
  double deviation_sigma = 0.0;   // in units of the axis sigma_inner
  bool exceeds_sigma = false;
  bool within_tether_tolerance = true;  // against the 0.3 uNm wire-tether budget
};

struct AnalysisReport {
  AxisFit pitch_fit;
  AxisFit roll_fit;
  PlanarFit planar_pitch;
  PlanarFit planar_roll;
  PlanarFit planar_thrust;
  CrossCorr cross_corr;           // raw command vs measured torque
  CrossCorr cross_corr_residual;  // command vs own-axis regression residual
  DispersionStats dispersion;
  ThrustStats thrust;
  std::vector<TrimCheck> trim_checks;
};

/// Least squares of the axis torque on its own command over all non-excluded
/// points. Rejects datasets with fewer than 3 usable points or a single
/// command level.
AxisFit axis_regression(const mapper::SweepDataset& ds, Axis axis);

/// Least squares of the chosen response on (1, V_o, dA).
PlanarFit planar_fit(const mapper::SweepDataset& ds, Response response);

/// Pearson correlation between each cross-axis command and the measured
/// torque (raw values).
CrossCorr cross_correlation(const mapper::SweepDataset& ds);

/// Same correlations computed on the residuals of the own-axis regression;
/// sensitive to small couplings that the raw statistic dilutes.
CrossCorr cross_correlation_residual(const mapper::SweepDataset& ds);

/// Residual dispersion about the per-axis trend lines, over the nine
/// smallest-magnitude command pairs (inner 3x3) and over the points at
/// maximum command magnitude. Throws when either class is missing.
DispersionStats dispersion_stats(const mapper::SweepDataset& ds, const AxisFit& pitch_fit,
                                 const AxisFit& roll_fit);

ThrustStats thrust_stats(const mapper::SweepDataset& ds);

/// For each trim, the command at which the recovered map predicts zero net
/// torque, against the trim the free-flight search actually found.
std::vector<TrimCheck> trim_consistency(const AxisFit& pitch_fit, const AxisFit& roll_fit,
                                        const DispersionStats& dispersion,
                                        const std::vector<TrimObservation>& trims,
                                        double tether_tolerance_unm = 0.3);

AnalysisReport analyze(const mapper::SweepDataset& ds,
                       const std::vector<TrimObservation>& trims = {},
                       double tether_tolerance_unm = 0.3);

}  // namespace fgt::analysis
