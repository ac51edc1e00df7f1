#include "fgt/calibkit.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fgt/error.hpp"
#include "fgt/stats.hpp"

namespace fgt::calibkit {

StiffnessFit calibrate_stiffness(std::span<const CalibrationPoint> points) {
  if (points.size() < 3)
    throw std::invalid_argument("calibrate_stiffness: need at least 3 points");

  bool has_positive = false, has_negative = false;
  std::vector<double> angle, torque;
  angle.reserve(points.size());
  torque.reserve(points.size());
  for (const auto& p : points) {
    if (!std::isfinite(p.applied_torque_unm) || !std::isfinite(p.measured_angle_rad))
      throw std::invalid_argument("calibrate_stiffness: non-finite calibration point");
    has_positive |= p.applied_torque_unm > 0.0;
    has_negative |= p.applied_torque_unm < 0.0;
    angle.push_back(p.measured_angle_rad);
    torque.push_back(p.applied_torque_unm);
  }
  if (!has_positive || !has_negative)
    throw std::invalid_argument(
        "calibrate_stiffness: loads must span both torque directions");

  const auto fit = stats::linear_fit(angle, torque);
  StiffnessFit out;
  out.ks_unm_per_rad = fit.slope;
  out.intercept_unm = fit.intercept;
  out.r_squared = fit.r_squared;
  out.n_points = fit.n;
  return out;
}

double resolution_budget_unm(double ks_unm_per_rad, double angular_resolution_rad) {
  if (!(ks_unm_per_rad > 0.0) || !(angular_resolution_rad > 0.0))
    throw std::invalid_argument("resolution_budget: inputs must be positive");
  return ks_unm_per_rad * angular_resolution_rad;
}

TimeConstantFit fit_time_constant(const gimbalsim::AxisTrajectory& trace,
                                  double window_fraction) {
  const auto n = trace.theta_rad.size();
  if (n < 3 || trace.t_s.size() != n)
    throw std::invalid_argument("fit_time_constant: malformed trace");

  const double theta0 = trace.theta_rad.front();
  if (theta0 == 0.0)
    throw ModelError("fit_time_constant: flat trace, nothing to fit");

  const double sign = theta0 > 0.0 ? 1.0 : -1.0;
  const double floor_abs = window_fraction * std::abs(theta0);

  for (double th : trace.theta_rad)
    if (sign * th < 0.0)
      throw ModelError("fit_time_constant: trace crosses zero (underdamped decay)");

  // Window: from the start until the decay first drops below the threshold.
  std::vector<double> t, log_abs;
  for (std::size_t i = 0; i < n; ++i) {
    const double th = trace.theta_rad[i];
    if (std::abs(th) < floor_abs) break;
    t.push_back(trace.t_s[i]);
    log_abs.push_back(std::log(std::abs(th)));
  }
  if (t.size() < 3)
    throw ModelError("fit_time_constant: window too short for a fit");

  // Require the trace itself to contain at least two time constants of decay.
  if (std::abs(trace.theta_rad.back()) > std::exp(-2.0) * std::abs(theta0))
    throw ModelError("fit_time_constant: trace has less than two time constants of data");

  const auto fit = stats::linear_fit(t, log_abs);
  if (!(fit.slope < 0.0))
    throw ModelError("fit_time_constant: trace does not decay");

  TimeConstantFit out;
  out.tau_s = -1.0 / fit.slope;
  out.r_squared = fit.r_squared;
  out.n_used = fit.n;
  return out;
}

double bandwidth_hz(double tau_s) {
  if (!(tau_s > 0.0)) throw std::invalid_argument("bandwidth_hz: tau must be > 0");
  return 1.0 / (2.0 * std::numbers::pi * tau_s);
}

}  // namespace fgt::calibkit
