#include "fgt/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "fgt/error.hpp"
#include "fgt/stats.hpp"

namespace fgt::analysis {

namespace {

struct Columns {
  std::vector<double> v_o;
  std::vector<double> d_a;
  std::vector<double> tau_pitch;
  std::vector<double> tau_roll;
  std::vector<double> thrust;
};

Columns usable_columns(const mapper::SweepDataset& ds) {
  Columns c;
  for (const auto& p : ds.points) {
    if (p.excluded) continue;
    c.v_o.push_back(p.v_o_volts);
    c.d_a.push_back(p.delta_a_volts);
    c.tau_pitch.push_back(p.tau_pitch_unm);
    c.tau_roll.push_back(p.tau_roll_unm);
    c.thrust.push_back(p.thrust_mgf);
  }
  return c;
}

double sd_about_zero(const std::vector<double>& residuals) {
  // Dispersion about an externally fitted trend: mean is the trend itself,
  // so only the n-1 correction is applied.
  if (residuals.size() < 2) return 0.0;
  double ss = 0.0;
  for (double r : residuals) ss += r * r;
  return std::sqrt(ss / static_cast<double>(residuals.size() - 1));
}

}  // namespace

AxisFit axis_regression(const mapper::SweepDataset& ds, Axis axis) {
  const Columns c = usable_columns(ds);
  if (c.v_o.size() < 3)
    throw std::invalid_argument("axis_regression: need at least 3 non-excluded points");
  const auto& cmd = axis == Axis::pitch ? c.v_o : c.d_a;
  const auto& tau = axis == Axis::pitch ? c.tau_pitch : c.tau_roll;

  stats::LinearFit fit;
  try {
    fit = stats::linear_fit(cmd, tau);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("axis_regression: degenerate command levels");
  }
  return AxisFit{fit.slope, fit.intercept, fit.r_squared, fit.n};
}

PlanarFit planar_fit(const mapper::SweepDataset& ds, Response response) {
  const Columns c = usable_columns(ds);
  const auto& y = response == Response::pitch_torque  ? c.tau_pitch
                  : response == Response::roll_torque ? c.tau_roll
                                                      : c.thrust;
  const auto coeffs = stats::planar_least_squares(c.v_o, c.d_a, y);

  PlanarFit fit;
  fit.c0 = coeffs.c0;
  fit.c_pitch = coeffs.c1;
  fit.c_roll = coeffs.c2;
  fit.residuals.reserve(y.size());
  double ss = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double r = y[i] - (coeffs.c0 + coeffs.c1 * c.v_o[i] + coeffs.c2 * c.d_a[i]);
    fit.residuals.push_back(r);
    ss += r * r;
  }
  const auto dof = static_cast<double>(y.size() > 3 ? y.size() - 3 : 1);
  fit.residual_sd = std::sqrt(ss / dof);
  return fit;
}

CrossCorr cross_correlation(const mapper::SweepDataset& ds) {
  const Columns c = usable_columns(ds);
  if (c.v_o.size() < 3)
    throw std::invalid_argument("cross_correlation: need at least 3 points");
  CrossCorr out;
  out.roll_cmd_vs_pitch_torque = stats::pearson(c.d_a, c.tau_pitch);
  out.pitch_cmd_vs_roll_torque = stats::pearson(c.v_o, c.tau_roll);
  return out;
}

CrossCorr cross_correlation_residual(const mapper::SweepDataset& ds) {
  const Columns c = usable_columns(ds);
  if (c.v_o.size() < 3)
    throw std::invalid_argument("cross_correlation: need at least 3 points");
  const AxisFit pitch = axis_regression(ds, Axis::pitch);
  const AxisFit roll = axis_regression(ds, Axis::roll);

  std::vector<double> res_pitch, res_roll;
  res_pitch.reserve(c.v_o.size());
  res_roll.reserve(c.v_o.size());
  for (std::size_t i = 0; i < c.v_o.size(); ++i) {
    res_pitch.push_back(c.tau_pitch[i] -
                        (pitch.intercept_unm + pitch.slope_unm_per_v * c.v_o[i]));
    res_roll.push_back(c.tau_roll[i] -
                       (roll.intercept_unm + roll.slope_unm_per_v * c.d_a[i]));
  }
  CrossCorr out;
  out.roll_cmd_vs_pitch_torque = stats::pearson(c.d_a, res_pitch);
  out.pitch_cmd_vs_roll_torque = stats::pearson(c.v_o, res_roll);
  return out;
}

namespace {

// The three smallest-|value| levels of one command axis.
std::set<double> inner_levels(const std::vector<double>& values) {
  std::set<double> unique(values.begin(), values.end());
  std::vector<double> sorted(unique.begin(), unique.end());
  std::sort(sorted.begin(), sorted.end(), [](double a, double b) {
    return std::abs(a) != std::abs(b) ? std::abs(a) < std::abs(b) : a < b;
  });
  if (sorted.size() > 3) sorted.resize(3);
  return {sorted.begin(), sorted.end()};
}

double max_abs_level(const std::vector<double>& values) {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

DispersionStats dispersion_stats(const mapper::SweepDataset& ds, const AxisFit& pitch_fit,
                                 const AxisFit& roll_fit) {
  const Columns c = usable_columns(ds);
  if (c.v_o.empty()) throw std::invalid_argument("dispersion_stats: empty dataset");

  const std::set<double> inner_pitch = inner_levels(c.v_o);
  const std::set<double> inner_roll = inner_levels(c.d_a);
  const double max_pitch = max_abs_level(c.v_o);
  const double max_roll = max_abs_level(c.d_a);

  std::vector<double> inner_res_pitch, inner_res_roll, extreme_res_pitch,
      extreme_res_roll;
  for (std::size_t i = 0; i < c.v_o.size(); ++i) {
    const double rp =
        c.tau_pitch[i] - (pitch_fit.intercept_unm + pitch_fit.slope_unm_per_v * c.v_o[i]);
    const double rr =
        c.tau_roll[i] - (roll_fit.intercept_unm + roll_fit.slope_unm_per_v * c.d_a[i]);
    if (inner_pitch.count(c.v_o[i]) && inner_roll.count(c.d_a[i])) {
      inner_res_pitch.push_back(rp);
      inner_res_roll.push_back(rr);
    }
    if (std::abs(c.v_o[i]) == max_pitch || std::abs(c.d_a[i]) == max_roll) {
      extreme_res_pitch.push_back(rp);
      extreme_res_roll.push_back(rr);
    }
  }

  if (inner_res_pitch.size() < 9)
    throw ModelError("dispersion_stats: inner 3x3 command block is incomplete");
  if (extreme_res_pitch.size() < 2)
    throw ModelError("dispersion_stats: no points at the extreme command levels");

  DispersionStats out;
  out.sigma_inner_unm =
      AxisPair{sd_about_zero(inner_res_pitch), sd_about_zero(inner_res_roll)};
  out.sigma_extreme_unm =
      AxisPair{sd_about_zero(extreme_res_pitch), sd_about_zero(extreme_res_roll)};
  out.n_inner = static_cast<int>(inner_res_pitch.size());
  out.n_extreme = static_cast<int>(extreme_res_pitch.size());
  return out;
}

ThrustStats thrust_stats(const mapper::SweepDataset& ds) {
  const Columns c = usable_columns(ds);
  if (c.thrust.empty()) throw std::invalid_argument("thrust_stats: empty dataset");

  ThrustStats out;
  out.mean_mgf = stats::mean(c.thrust);
  double max_dev = 0.0;
  for (double t : c.thrust) max_dev = std::max(max_dev, std::abs(t - out.mean_mgf));
  out.max_dev_fraction = out.mean_mgf != 0.0 ? max_dev / std::abs(out.mean_mgf) : 0.0;

  const auto plane = planar_fit(ds, Response::thrust);
  out.slope_pitch_mgf_per_v = plane.c_pitch;
  out.slope_roll_mgf_per_v = plane.c_roll;
  return out;
}

std::vector<TrimCheck> trim_consistency(const AxisFit& pitch_fit, const AxisFit& roll_fit,
                                        const DispersionStats& dispersion,
                                        const std::vector<TrimObservation>& trims,
                                        double tether_tolerance_unm) {
  if (trims.empty())
    throw std::invalid_argument("trim_consistency: need at least one trim");
  if (pitch_fit.slope_unm_per_v == 0.0 || roll_fit.slope_unm_per_v == 0.0)
    throw std::invalid_argument("trim_consistency: zero regression slope");

  std::vector<TrimCheck> checks;
  for (const auto& obs : trims) {
    AxisPair external{0.0, 0.0};
    if (obs.load) external[obs.load->axis] = firmodel::offset_torque_unm(*obs.load);

    for (Axis axis : {Axis::roll, Axis::pitch}) {
      const AxisFit& fit = axis == Axis::pitch ? pitch_fit : roll_fit;
      TrimCheck check;
      check.source = obs.label;
      check.axis = axis;
      check.external_torque_unm = external[axis];
      // At trim the vehicle torque cancels the external load:
      // slope * cmd + intercept + external = 0.
      check.predicted_trim_v =
          -(fit.intercept_unm + external[axis]) / fit.slope_unm_per_v;
      check.observed_trim_v = axis == Axis::pitch ? obs.trim.v_o_v : obs.trim.delta_a_v;
      check.deviation_v = check.observed_trim_v - check.predicted_trim_v;
      check.deviation_torque_unm = fit.slope_unm_per_v * check.deviation_v;
      const double sigma = dispersion.sigma_inner_unm[axis];
      check.deviation_sigma =
          sigma > 0.0 ? std::abs(check.deviation_torque_unm) / sigma : 0.0;
      check.exceeds_sigma = std::abs(check.deviation_torque_unm) > sigma;
      check.within_tether_tolerance =
          std::abs(check.deviation_torque_unm) <= tether_tolerance_unm;
      checks.push_back(check);
    }
  }
  return checks;
}

AnalysisReport analyze(const mapper::SweepDataset& ds,
                       const std::vector<TrimObservation>& trims,
                       double tether_tolerance_unm) {
  AnalysisReport report;
  report.pitch_fit = axis_regression(ds, Axis::pitch);
  report.roll_fit = axis_regression(ds, Axis::roll);
  report.planar_pitch = planar_fit(ds, Response::pitch_torque);
  report.planar_roll = planar_fit(ds, Response::roll_torque);
  report.planar_thrust = planar_fit(ds, Response::thrust);
  report.cross_corr = cross_correlation(ds);
  report.cross_corr_residual = cross_correlation_residual(ds);
  report.dispersion = dispersion_stats(ds, report.pitch_fit, report.roll_fit);
  report.thrust = thrust_stats(ds);
  if (!trims.empty())
    report.trim_checks = trim_consistency(report.pitch_fit, report.roll_fit,
                                          report.dispersion, trims, tether_tolerance_unm);
  return report;
}

}  // namespace fgt::analysis
