#pragma once

#include <filesystem>
#include <functional>
#include <vector>

#include "fgt/units.hpp"

namespace fgt::gimbalsim {

/// Physical constants of one rotational axis of the sensor. The restoring
/// torque is the gravitational pendulum term of the counterweight plus the
/// flexure stiffness, reduced by the robot's own pendulum term when its
/// center of mass sits off the axis.
struct GimbalParams {
  double counterweight_mass_mg = 50.0;       // m_b
  double counterweight_lever_mm = 17.0;      // l_b, below the axis
  double robot_mass_mg = 180.0;              // m_R
  double robot_com_offset_mm = 0.0;          // l_R, above the axis
  double flexure_stiffness_unm_per_rad = 0;  // k_f
  double damping_unm_s_per_rad = 0.0;        // b, glycerin rod
  double inertia_mg_mm2 = 1.0e6;             // I about the axis
  double gravity_m_s2 = units::kStandardGravity;

  /// Throws std::invalid_argument for non-positive inertia, negative damping
  /// or flexure stiffness, or a non-positive effective stiffness (unstable
  /// upright equilibrium).
  void validate() const;
};

struct GimbalState {
  double theta_rad = 0.0;
  double theta_dot_rad_s = 0.0;
  double t_s = 0.0;
};

struct AxisTrajectory {
  std::vector<double> t_s;
  std::vector<double> theta_rad;
  std::vector<double> tau_unm;
};

/// Angular acceleration from the full nonlinear balance:
///   theta_dd = (tau - m_b g l_b sin(theta) + m_R g l_R sin(theta)
///              - k_f theta - b theta_dot) / I
double dynamics_rhs(const GimbalParams& p, const GimbalState& s, double tau_unm);

/// Linearized total stiffness k_s = m_b g l_b + k_f. The robot term is
/// dropped: mounting places the center of mass on the axis (l_R ~ 0).
double total_stiffness_unm_per_rad(const GimbalParams& p);

struct Deflection {
  double theta_rad = 0.0;
  /// False when |theta| exceeds the small-angle envelope; the linear
  /// inversion is then a degraded estimate, not an error.
  bool within_small_angle = true;
};

/// Small-angle static estimate theta = tau / k_s, with an envelope check
/// (default 10 deg).
Deflection static_deflection(const GimbalParams& p, double tau_unm,
                             double envelope_deg = 10.0);

/// Exact static equilibrium angle from the nonlinear torque balance
/// tau = (m_b g l_b - m_R g l_R) sin(theta) + k_f theta, solved by Newton
/// iteration. Throws ModelError when the balance has no root inside the
/// +-pi/2 validity envelope.
double equilibrium_angle(const GimbalParams& p, double tau_unm);

/// One classical 4th-order explicit step with constant applied torque.
/// Throws ModelError when |theta| leaves the +-pi/2 validity envelope.
GimbalState step(const GimbalParams& p, const GimbalState& s, double tau_unm, double dt_s);

/// Integrates one axis under a time-varying applied torque, recording every
/// step (duration/dt + 1 samples including t = 0).
AxisTrajectory simulate_run(const GimbalParams& p,
                            const std::function<double(double)>& tau_unm_of_t,
                            double duration_s, double dt_s,
                            const GimbalState& initial = {});

/// Free decay from (theta0, 0) with no applied torque.
AxisTrajectory step_response(const GimbalParams& p, double theta0_rad,
                             double duration_s, double dt_s);

/// Linear interpolation of theta at time t (clamped to the trace ends).
double trajectory_angle_at(const AxisTrajectory& traj, double t_s);

/// CSV dump of a pitch/roll trajectory pair with header
/// (t_seconds, theta_pitch_rad, theta_roll_rad, tau_pitch_uNm, tau_roll_uNm).
void write_trajectory_csv(const AxisTrajectory& pitch, const AxisTrajectory& roll,
                          const std::filesystem::path& path);

}  // namespace fgt::gimbalsim
