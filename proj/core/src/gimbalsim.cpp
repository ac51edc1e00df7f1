#include "fgt/gimbalsim.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fgt/csv.hpp"
#include "fgt/error.hpp"

namespace fgt::gimbalsim {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

// SI mirror of GimbalParams, converted once per run.
struct SiParams {
  double pendulum_nm = 0.0;  // (m_b l_b - m_R l_R) g
  double kf_nm = 0.0;
  double b_nm_s = 0.0;
  double inertia_kg_m2 = 0.0;

  explicit SiParams(const GimbalParams& p) {
    const double g = p.gravity_m_s2;
    pendulum_nm = (units::mg_to_kg(p.counterweight_mass_mg) *
                       units::mm_to_m(p.counterweight_lever_mm) -
                   units::mg_to_kg(p.robot_mass_mg) *
                       units::mm_to_m(p.robot_com_offset_mm)) *
                  g;
    kf_nm = units::unm_to_nm(p.flexure_stiffness_unm_per_rad);
    b_nm_s = units::unm_to_nm(p.damping_unm_s_per_rad);
    inertia_kg_m2 = units::mg_mm2_to_kg_m2(p.inertia_mg_mm2);
  }

  double accel(double theta, double theta_dot, double tau_nm) const {
    return (tau_nm - pendulum_nm * std::sin(theta) - kf_nm * theta -
            b_nm_s * theta_dot) /
           inertia_kg_m2;
  }

  // Static restoring torque at angle theta, in Nm.
  double restoring_nm(double theta) const {
    return pendulum_nm * std::sin(theta) + kf_nm * theta;
  }
};

struct Derivative {
  double d_theta;
  double d_theta_dot;
};

Derivative eval(const SiParams& si, double theta, double theta_dot, double tau_nm) {
  return {theta_dot, si.accel(theta, theta_dot, tau_nm)};
}

// One RK4 step; tau may vary over the step and is evaluated at the substep
// times.
GimbalState rk4_step(const SiParams& si, const GimbalState& s,
                     const std::function<double(double)>& tau_nm_of_t, double dt) {
  const double t = s.t_s;
  const double tau0 = tau_nm_of_t(t);
  const double tau_h = tau_nm_of_t(t + 0.5 * dt);
  const double tau1 = tau_nm_of_t(t + dt);

  const Derivative k1 = eval(si, s.theta_rad, s.theta_dot_rad_s, tau0);
  const Derivative k2 = eval(si, s.theta_rad + 0.5 * dt * k1.d_theta,
                             s.theta_dot_rad_s + 0.5 * dt * k1.d_theta_dot, tau_h);
  const Derivative k3 = eval(si, s.theta_rad + 0.5 * dt * k2.d_theta,
                             s.theta_dot_rad_s + 0.5 * dt * k2.d_theta_dot, tau_h);
  const Derivative k4 = eval(si, s.theta_rad + dt * k3.d_theta,
                             s.theta_dot_rad_s + dt * k3.d_theta_dot, tau1);

  GimbalState next;
  next.theta_rad = s.theta_rad + dt / 6.0 *
                                     (k1.d_theta + 2.0 * k2.d_theta +
                                      2.0 * k3.d_theta + k4.d_theta);
  next.theta_dot_rad_s = s.theta_dot_rad_s +
                         dt / 6.0 *
                             (k1.d_theta_dot + 2.0 * k2.d_theta_dot +
                              2.0 * k3.d_theta_dot + k4.d_theta_dot);
  next.t_s = s.t_s + dt;
  return next;
}

void check_envelope(double theta_rad) {
  if (std::abs(theta_rad) > kHalfPi)
    throw ModelError("gimbal deflection left the +-90 deg validity envelope (theta = " +
                     std::to_string(units::rad_to_deg(theta_rad)) + " deg)");
}

}  // namespace

void GimbalParams::validate() const {
  if (!(inertia_mg_mm2 > 0.0))
    throw std::invalid_argument("GimbalParams: inertia must be > 0");
  if (damping_unm_s_per_rad < 0.0)
    throw std::invalid_argument("GimbalParams: damping must be >= 0");
  if (flexure_stiffness_unm_per_rad < 0.0)
    throw std::invalid_argument("GimbalParams: flexure stiffness must be >= 0");
  const double g = gravity_m_s2;
  const double effective =
      units::nm_to_unm((units::mg_to_kg(counterweight_mass_mg) *
                            units::mm_to_m(counterweight_lever_mm) -
                        units::mg_to_kg(robot_mass_mg) * units::mm_to_m(robot_com_offset_mm)) *
                       g) +
      flexure_stiffness_unm_per_rad;
  if (!(effective > 0.0))
    throw std::invalid_argument(
        "GimbalParams: effective stiffness m_b g l_b - m_R g l_R + k_f must be > 0");
}

double dynamics_rhs(const GimbalParams& p, const GimbalState& s, double tau_unm) {
  p.validate();
  return SiParams(p).accel(s.theta_rad, s.theta_dot_rad_s, units::unm_to_nm(tau_unm));
}

double total_stiffness_unm_per_rad(const GimbalParams& p) {
  return units::nm_to_unm(units::mg_to_kg(p.counterweight_mass_mg) *
                          units::mm_to_m(p.counterweight_lever_mm) * p.gravity_m_s2) +
         p.flexure_stiffness_unm_per_rad;
}

Deflection static_deflection(const GimbalParams& p, double tau_unm, double envelope_deg) {
  p.validate();
  Deflection d;
  d.theta_rad = tau_unm / total_stiffness_unm_per_rad(p);
  d.within_small_angle = std::abs(d.theta_rad) <= units::deg_to_rad(envelope_deg);
  return d;
}

double equilibrium_angle(const GimbalParams& p, double tau_unm) {
  p.validate();
  const SiParams si(p);
  const double tau_nm = units::unm_to_nm(tau_unm);

  // The restoring torque is strictly increasing on (-pi/2, pi/2) for valid
  // params, so a root is unique if it exists.
  if (tau_nm > si.restoring_nm(kHalfPi * 0.9999) ||
      tau_nm < si.restoring_nm(-kHalfPi * 0.9999))
    throw ModelError("equilibrium_angle: applied torque exceeds restoring capacity");

  const double ks_nm = units::unm_to_nm(total_stiffness_unm_per_rad(p));
  double theta = tau_nm / ks_nm;  // small-angle seed
  for (int i = 0; i < 50; ++i) {
    const double f = si.restoring_nm(theta) - tau_nm;
    const double fp = si.pendulum_nm * std::cos(theta) + si.kf_nm;
    const double delta = f / fp;
    theta -= delta;
    if (std::abs(delta) < 1e-15) break;
  }
  check_envelope(theta);
  return theta;
}

GimbalState step(const GimbalParams& p, const GimbalState& s, double tau_unm, double dt_s) {
  if (!(dt_s > 0.0)) throw std::invalid_argument("step: dt must be > 0");
  p.validate();
  const SiParams si(p);
  const double tau_nm = units::unm_to_nm(tau_unm);
  GimbalState next = rk4_step(si, s, [tau_nm](double) { return tau_nm; }, dt_s);
  check_envelope(next.theta_rad);
  return next;
}

AxisTrajectory simulate_run(const GimbalParams& p,
                            const std::function<double(double)>& tau_unm_of_t,
                            double duration_s, double dt_s, const GimbalState& initial) {
  if (!(duration_s > 0.0)) throw std::invalid_argument("simulate_run: duration must be > 0");
  if (!(dt_s > 0.0)) throw std::invalid_argument("simulate_run: dt must be > 0");
  p.validate();

  const SiParams si(p);
  const auto tau_nm_of_t = [&tau_unm_of_t](double t) {
    return units::unm_to_nm(tau_unm_of_t(t));
  };

  const auto n_steps = static_cast<std::size_t>(std::llround(duration_s / dt_s));
  AxisTrajectory traj;
  traj.t_s.reserve(n_steps + 1);
  traj.theta_rad.reserve(n_steps + 1);
  traj.tau_unm.reserve(n_steps + 1);

  GimbalState state = initial;
  traj.t_s.push_back(state.t_s);
  traj.theta_rad.push_back(state.theta_rad);
  traj.tau_unm.push_back(tau_unm_of_t(state.t_s));
  for (std::size_t i = 0; i < n_steps; ++i) {
    state = rk4_step(si, state, tau_nm_of_t, dt_s);
    check_envelope(state.theta_rad);
    traj.t_s.push_back(state.t_s);
    traj.theta_rad.push_back(state.theta_rad);
    traj.tau_unm.push_back(tau_unm_of_t(state.t_s));
  }
  return traj;
}

AxisTrajectory step_response(const GimbalParams& p, double theta0_rad,
                             double duration_s, double dt_s) {
  check_envelope(theta0_rad);
  GimbalState initial;
  initial.theta_rad = theta0_rad;
  return simulate_run(p, [](double) { return 0.0; }, duration_s, dt_s, initial);
}

double trajectory_angle_at(const AxisTrajectory& traj, double t_s) {
  if (traj.t_s.empty()) throw std::invalid_argument("trajectory_angle_at: empty trace");
  if (t_s <= traj.t_s.front()) return traj.theta_rad.front();
  if (t_s >= traj.t_s.back()) return traj.theta_rad.back();
  // Uniform grid: index arithmetic instead of a search.
  const double dt = (traj.t_s.back() - traj.t_s.front()) /
                    static_cast<double>(traj.t_s.size() - 1);
  auto i = static_cast<std::size_t>((t_s - traj.t_s.front()) / dt);
  if (i + 1 >= traj.t_s.size()) i = traj.t_s.size() - 2;
  const double w = (t_s - traj.t_s[i]) / (traj.t_s[i + 1] - traj.t_s[i]);
  return traj.theta_rad[i] + w * (traj.theta_rad[i + 1] - traj.theta_rad[i]);
}

void write_trajectory_csv(const AxisTrajectory& pitch, const AxisTrajectory& roll,
                          const std::filesystem::path& path) {
  if (pitch.t_s.size() != roll.t_s.size())
    throw std::invalid_argument("write_trajectory_csv: length mismatch between axes");
  csv::Writer writer(path);
  writer.header({"t_seconds", "theta_pitch_rad", "theta_roll_rad", "tau_pitch_uNm",
                 "tau_roll_uNm"});
  for (std::size_t i = 0; i < pitch.t_s.size(); ++i) {
    writer.row_numeric({pitch.t_s[i], pitch.theta_rad[i], roll.theta_rad[i],
                        pitch.tau_unm[i], roll.tau_unm[i]});
  }
}

}  // namespace fgt::gimbalsim
