#pragma once

#include <span>
#include <vector>

#include "fgt/gimbalsim.hpp"
#include "fgt/types.hpp"

namespace fgt::calibkit {

struct CalibrationPoint {
  double applied_torque_unm = 0.0;  // signed
  double measured_angle_rad = 0.0;
  Axis axis = Axis::roll;
};

struct StiffnessFit {
  double ks_unm_per_rad = 0.0;
  double intercept_unm = 0.0;
  double r_squared = 0.0;
  int n_points = 0;
};

/// Least-squares regression of applied torque on measured angle; the slope
/// is the total device stiffness k_s. Requires at least 3 points with both
/// torque signs represented (loads were hung in both directions).
StiffnessFit calibrate_stiffness(std::span<const CalibrationPoint> points);

/// Smallest resolvable torque: k_s times the angular resolution of the
/// readout.
double resolution_budget_unm(double ks_unm_per_rad, double angular_resolution_rad);

struct TimeConstantFit {
  double tau_s = 0.0;
  double r_squared = 0.0;  // of the log-linear fit
  int n_used = 0;
};

/// Dominant time constant of a free-decay trace: least squares of log|theta|
/// vs t over the window where |theta| >= 5% of theta0 (threshold
/// configurable). Rejects flat traces, traces with less than two time
/// constants of decay, and oscillatory (underdamped) traces.
TimeConstantFit fit_time_constant(const gimbalsim::AxisTrajectory& trace,
                                  double window_fraction = 0.05);

/// First-order cutoff frequency f_c = 1 / (2 pi tau).
double bandwidth_hz(double tau_s);

}  // namespace fgt::calibkit
