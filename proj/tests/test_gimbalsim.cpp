#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fgt/error.hpp"
#include "fgt/gimbalsim.hpp"
#include "fgt/rng.hpp"
#include "fgt/scenario.hpp"
#include "fgt/units.hpp"

using namespace fgt;
using namespace fgt::gimbalsim;

namespace {

GimbalParams bare_pendulum() {
  GimbalParams p;
  p.counterweight_mass_mg = 50;
  p.counterweight_lever_mm = 17;
  p.robot_mass_mg = 180;
  p.robot_com_offset_mm = 0;
  p.flexure_stiffness_unm_per_rad = 0;
  p.damping_unm_s_per_rad = 0;
  p.inertia_mg_mm2 = 1e6;
  return p;
}

GimbalParams paper_roll() { return scenario::paper_scenario().gimbal_roll; }
GimbalParams paper_pitch() { return scenario::paper_scenario().gimbal_pitch; }

// Total mechanical energy in SI, for the dissipation check.
double energy(const GimbalParams& p, const GimbalState& s) {
  const double pendulum = (units::mg_to_kg(p.counterweight_mass_mg) *
                               units::mm_to_m(p.counterweight_lever_mm) -
                           units::mg_to_kg(p.robot_mass_mg) *
                               units::mm_to_m(p.robot_com_offset_mm)) *
                          p.gravity_m_s2;
  const double kf = units::unm_to_nm(p.flexure_stiffness_unm_per_rad);
  const double inertia = units::mg_mm2_to_kg_m2(p.inertia_mg_mm2);
  return 0.5 * inertia * s.theta_dot_rad_s * s.theta_dot_rad_s +
         pendulum * (1.0 - std::cos(s.theta_rad)) + 0.5 * kf * s.theta_rad * s.theta_rad;
}

}  // namespace

TEST_CASE("equilibrium has zero acceleration") {
  CHECK(dynamics_rhs(bare_pendulum(), GimbalState{}, 0.0) == 0.0);
}

TEST_CASE("pendulum restoring stiffness matches m_b g l_b") {
  const auto p = bare_pendulum();
  const double theta = 1e-4;
  GimbalState s;
  s.theta_rad = theta;
  const double accel = dynamics_rhs(p, s, 0.0);
  const double stiffness_unm =
      -accel * units::mg_mm2_to_kg_m2(p.inertia_mg_mm2) / theta * 1e6;
  CHECK(stiffness_unm == doctest::Approx(8.3357).epsilon(1e-4));
  CHECK(stiffness_unm == doctest::Approx(8.34).epsilon(2e-3));
}

TEST_CASE("positive torque at rest accelerates positively") {
  CHECK(dynamics_rhs(bare_pendulum(), GimbalState{}, 0.5) > 0.0);
}

TEST_CASE("total stiffness composition") {
  GimbalParams p = bare_pendulum();
  p.counterweight_mass_mg = 0;
  p.flexure_stiffness_unm_per_rad = 5.0;
  CHECK(total_stiffness_unm_per_rad(p) == doctest::Approx(5.0));

  GimbalParams q = bare_pendulum();
  q.flexure_stiffness_unm_per_rad = 78.754;
  CHECK(total_stiffness_unm_per_rad(q) == doctest::Approx(87.0896).epsilon(1e-4));
  CHECK(total_stiffness_unm_per_rad(q) * units::deg_to_rad(1.0) ==
        doctest::Approx(1.52).epsilon(1e-3));

  // Strictly increasing in the counterweight mass.
  GimbalParams heavier = q;
  heavier.counterweight_mass_mg += 10;
  CHECK(total_stiffness_unm_per_rad(heavier) > total_stiffness_unm_per_rad(q));
}

TEST_CASE("static deflection inverts the stiffness") {
  CHECK(static_deflection(paper_roll(), 0.0).theta_rad == 0.0);

  // 1.88 uNm at the 1.88 uNm/deg axis deflects one degree.
  const auto d = static_deflection(paper_pitch(), 1.88);
  CHECK(units::rad_to_deg(d.theta_rad) == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(d.within_small_angle);

  const auto edge = static_deflection(paper_pitch(), 1.88 * 11.0);
  CHECK_FALSE(edge.within_small_angle);
}

TEST_CASE("parameter invariants are enforced") {
  GimbalParams p = bare_pendulum();
  p.inertia_mg_mm2 = 0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);

  GimbalParams unstable = bare_pendulum();
  unstable.robot_com_offset_mm = 10.0;  // robot pendulum overwhelms the counterweight
  CHECK_THROWS_AS(unstable.validate(), std::invalid_argument);
}

TEST_CASE("step leaves the equilibrium untouched") {
  const auto p = paper_roll();
  const GimbalState s;
  const auto next = step(p, s, 0.0, 1e-3);
  CHECK(next.theta_rad == 0.0);
  CHECK(next.theta_dot_rad_s == 0.0);
}

TEST_CASE("step aborts outside the validity envelope") {
  const auto p = bare_pendulum();
  GimbalState s;
  s.theta_rad = 1.57;
  s.theta_dot_rad_s = 50.0;
  CHECK_THROWS_AS(step(p, s, 100.0, 1e-2), ModelError);
}

TEST_CASE("integrator self-convergence order on a smooth oscillatory case") {
  GimbalParams p = bare_pendulum();
  p.flexure_stiffness_unm_per_rad = 78.754;
  p.damping_unm_s_per_rad = 0.692;  // lightly damped
  p.inertia_mg_mm2 = 5.5e5;         // ~2 Hz natural frequency

  const double theta0 = 0.3;
  auto final_theta = [&](double dt) {
    return step_response(p, theta0, 3.0, dt).theta_rad.back();
  };
  const double t1 = final_theta(1e-3);
  const double t2 = final_theta(5e-4);
  const double t3 = final_theta(2.5e-4);
  const double order = std::log2(std::abs(t1 - t2) / std::abs(t2 - t3));
  CHECK(order >= 3.5);
}

TEST_CASE("energy is non-increasing under damped free decay") {
  const auto p = paper_roll();
  GimbalState s;
  s.theta_rad = units::deg_to_rad(4.0);
  double prev = energy(p, s);
  for (int i = 0; i < 5000; ++i) {
    s = step(p, s, 0.0, 1e-3);
    const double e = energy(p, s);
    CHECK(e <= prev + 1e-18);
    prev = e;
  }
}

TEST_CASE("overdamped decay is monotone with no zero crossing") {
  const auto p = paper_roll();
  // b^2 > 4 I k_s in consistent units
  const double b = units::unm_to_nm(p.damping_unm_s_per_rad);
  const double k = units::unm_to_nm(total_stiffness_unm_per_rad(p));
  const double inertia = units::mg_mm2_to_kg_m2(p.inertia_mg_mm2);
  REQUIRE(b * b > 4.0 * inertia * k);

  const auto traj = step_response(p, units::deg_to_rad(4.0), 15.0, 1e-3);
  for (std::size_t i = 1; i < traj.theta_rad.size(); ++i) {
    CHECK(traj.theta_rad[i] <= traj.theta_rad[i - 1] + 1e-15);
    CHECK(traj.theta_rad[i] >= -1e-12);
  }
}

TEST_CASE("damping tuned for 3.5 s decays to 1/e near 3.5 s") {
  GimbalParams p = paper_roll();
  const double ks = total_stiffness_unm_per_rad(p);
  p.damping_unm_s_per_rad = 3.5 * ks;
  p.inertia_mg_mm2 = 0.02 * p.damping_unm_s_per_rad * 1e6;

  const double theta0 = units::deg_to_rad(4.0);
  const auto traj = step_response(p, theta0, 8.0, 1e-3);
  double crossing = 0.0;
  for (std::size_t i = 0; i < traj.theta_rad.size(); ++i) {
    if (traj.theta_rad[i] <= theta0 / std::numbers::e) {
      crossing = traj.t_s[i];
      break;
    }
  }
  CHECK(crossing == doctest::Approx(3.5).epsilon(0.06));
}

TEST_CASE("zero torque keeps both axes at rest, bit-identically") {
  const auto zero = [](double) { return 0.0; };
  const auto pitch_alone = simulate_run(paper_pitch(), zero, 3.0, 1e-3);
  const auto pitch_with_roll = simulate_run(paper_pitch(), zero, 3.0, 1e-3);
  const auto roll = simulate_run(paper_roll(), zero, 3.0, 1e-3);
  for (double th : roll.theta_rad) CHECK(th == 0.0);
  REQUIRE(pitch_alone.theta_rad.size() == pitch_with_roll.theta_rad.size());
  for (std::size_t i = 0; i < pitch_alone.theta_rad.size(); ++i)
    CHECK(pitch_alone.theta_rad[i] == pitch_with_roll.theta_rad[i]);
}

TEST_CASE("constant torque settles at the static deflection") {
  const auto p = paper_roll();
  const double tau = 1.0;
  const auto traj =
      simulate_run(p, [tau](double) { return tau; }, 37.0, 1e-3);
  const double expected = static_deflection(p, tau).theta_rad;
  CHECK(traj.theta_rad.back() ==
        doctest::Approx(expected).epsilon(0.005));

  // Doubling the damping changes only the transient, not the endpoint.
  GimbalParams heavy = p;
  heavy.damping_unm_s_per_rad *= 2.0;
  const auto traj2 =
      simulate_run(heavy, [tau](double) { return tau; }, 74.0, 1e-3);
  CHECK(traj2.theta_rad.back() == doctest::Approx(traj.theta_rad.back()).epsilon(1e-4));
}

TEST_CASE("equilibrium is the unique static root for valid parameters") {
  Rng rng(9001);
  for (int draw = 0; draw < 20; ++draw) {
    GimbalParams p = bare_pendulum();
    p.counterweight_mass_mg = rng.uniform(20, 80);
    p.counterweight_lever_mm = rng.uniform(5, 25);
    p.flexure_stiffness_unm_per_rad = rng.uniform(0, 150);
    p.validate();

    // Static balance sign changes exactly once across (-pi/2, pi/2).
    int sign_changes = 0;
    double prev = dynamics_rhs(p, GimbalState{-1.5, 0.0, 0.0}, 0.0);
    for (double theta = -1.5; theta <= 1.5; theta += 0.01) {
      const double f = dynamics_rhs(p, GimbalState{theta, 0.0, 0.0}, 0.0);
      if ((f > 0) != (prev > 0) && f != 0.0) ++sign_changes;
      prev = f;
    }
    CHECK(sign_changes == 1);
    CHECK(equilibrium_angle(p, 0.0) == doctest::Approx(0.0));
  }
}

TEST_CASE("equilibrium angle solves the nonlinear balance") {
  const auto p = paper_roll();
  const double tau = -20.6;  // a large mapping-fly roll torque
  const double theta = equilibrium_angle(p, tau);
  CHECK(dynamics_rhs(p, GimbalState{theta, 0.0, 0.0}, tau) ==
        doctest::Approx(0.0).epsilon(1e-10));
  CHECK_THROWS_AS(equilibrium_angle(p, 1e5), ModelError);
}

TEST_CASE("trajectory interpolation is linear between samples") {
  AxisTrajectory traj;
  traj.t_s = {0.0, 0.1, 0.2};
  traj.theta_rad = {0.0, 1.0, 0.0};
  traj.tau_unm = {0.0, 0.0, 0.0};
  CHECK(trajectory_angle_at(traj, 0.05) == doctest::Approx(0.5));
  CHECK(trajectory_angle_at(traj, 0.15) == doctest::Approx(0.5));
  CHECK(trajectory_angle_at(traj, -1.0) == doctest::Approx(0.0));
  CHECK(trajectory_angle_at(traj, 5.0) == doctest::Approx(0.0));
}

TEST_CASE("small-angle error stays inside the documented bound") {
  // |sin(theta) - theta| / theta at 10 degrees is below 0.51%.
  const double theta = units::deg_to_rad(10.0);
  CHECK(std::abs(std::sin(theta) - theta) / theta < 0.0051);
}
