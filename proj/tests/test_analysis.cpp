#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "fgt/analysis.hpp"
#include "fgt/error.hpp"
#include "fgt/rng.hpp"
#include "fgt/stats.hpp"

using namespace fgt;
using namespace fgt::analysis;

namespace {

// Synthetic dataset generator over the default 7x11 grid with the four
// extreme corners excluded, mirroring the sweep layout.
struct Generator {
  double pitch_slope = 0.13;
  double pitch_bias = 0.39;
  double roll_slope = 0.49;
  double roll_bias = -8.33;
  double c_rp = 0.0;  // dA -> pitch torque
  double c_pr = 0.0;  // V_o -> roll torque
  double thrust0 = 180.0;
  double thrust_pitch = -0.26;
  double thrust_roll = -0.16;
  AxisPair inner_sd{0.0, 0.0};
  AxisPair extreme_sd{0.0, 0.0};
  double thrust_sd = 0.0;

  mapper::SweepDataset make(std::uint64_t seed) const {
    Rng rng(derive_stream(seed, 0xDA7A));
    mapper::SweepDataset ds;
    ds.seed = seed;
    for (double v_o : {-15, -10, -5, 0, 5, 10, 15}) {
      for (double d_a : {-25, -20, -15, -10, -5, 0, 5, 10, 15, 20, 25}) {
        mapper::MeasuredPoint p;
        p.v_o_volts = v_o;
        p.delta_a_volts = d_a;
        p.excluded = std::abs(v_o) == 15 && std::abs(d_a) == 25;
        if (!p.excluded) {
          const bool extreme = std::abs(v_o) == 15 || std::abs(d_a) == 25;
          const AxisPair& sd = extreme ? extreme_sd : inner_sd;
          p.tau_pitch_unm =
              pitch_slope * v_o + pitch_bias + c_rp * d_a + rng.gaussian(0, sd.pitch);
          p.tau_roll_unm =
              roll_slope * d_a + roll_bias + c_pr * v_o + rng.gaussian(0, sd.roll);
          p.thrust_mgf = thrust0 + thrust_pitch * v_o + thrust_roll * d_a +
                         rng.gaussian(0, thrust_sd);
        }
        ds.points.push_back(p);
      }
    }
    return ds;
  }
};

Generator paper_noise() {
  Generator g;
  g.inner_sd = AxisPair{0.20, 0.77};
  g.extreme_sd = AxisPair{0.20, 0.77};
  g.thrust_sd = 2.19;
  return g;
}

}  // namespace

TEST_CASE("noiseless axis regression is exact") {
  Generator g;
  const auto ds = g.make(1);
  const auto fit = axis_regression(ds, Axis::pitch);
  CHECK(fit.slope_unm_per_v == doctest::Approx(0.13).epsilon(1e-12));
  CHECK(fit.intercept_unm == doctest::Approx(0.39).epsilon(1e-12));
  CHECK(fit.r_squared == doctest::Approx(1.0));
  CHECK(fit.n == 73);
}

TEST_CASE("degenerate datasets are rejected") {
  mapper::SweepDataset ds;
  for (int i = 0; i < 5; ++i) {
    mapper::MeasuredPoint p;
    p.v_o_volts = 3.0;  // single pitch level
    p.delta_a_volts = i;
    p.tau_pitch_unm = 1.0;
    p.tau_roll_unm = i;
    ds.points.push_back(p);
  }
  CHECK_THROWS_AS(axis_regression(ds, Axis::pitch), std::invalid_argument);
  CHECK_NOTHROW(axis_regression(ds, Axis::roll));
}

TEST_CASE("slope is invariant when a constant shifts every torque") {
  Generator g;
  auto ds = g.make(2);
  const auto before = axis_regression(ds, Axis::roll);
  for (auto& p : ds.points)
    if (!p.excluded) p.tau_roll_unm += 5.5;
  const auto after = axis_regression(ds, Axis::roll);
  CHECK(after.slope_unm_per_v == doctest::Approx(before.slope_unm_per_v).epsilon(1e-12));
  CHECK(after.intercept_unm == doctest::Approx(before.intercept_unm + 5.5).epsilon(1e-9));
}

TEST_CASE("Monte Carlo slope recovery at the bench noise levels") {
  const Generator g = paper_noise();
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto ds = g.make(seed);
    const auto pitch = axis_regression(ds, Axis::pitch);
    const auto roll = axis_regression(ds, Axis::roll);
    CHECK(std::abs(pitch.slope_unm_per_v - 0.13) < 0.01);
    CHECK(pitch.r_squared >= 0.93);
    CHECK(std::abs(roll.slope_unm_per_v - 0.49) < 0.04);
    CHECK(roll.r_squared >= 0.96);
  }
}

TEST_CASE("noiseless planar fit has zero cross coefficient and residuals") {
  Generator g;
  const auto ds = g.make(3);
  const auto plane = planar_fit(ds, Response::pitch_torque);
  CHECK(plane.c_pitch == doctest::Approx(0.13).epsilon(1e-12));
  CHECK(std::abs(plane.c_roll) < 1e-12);
  for (double r : plane.residuals) CHECK(std::abs(r) < 1e-10);
}

TEST_CASE("an injected coupling is identified exactly without noise") {
  Generator g;
  g.c_rp = 0.05;
  const auto ds = g.make(4);
  const auto plane = planar_fit(ds, Response::pitch_torque);
  CHECK(plane.c_roll == doctest::Approx(0.05).epsilon(1e-9));
}

TEST_CASE("planar fit rejects rank-deficient designs") {
  mapper::SweepDataset ds;
  for (int i = 0; i < 8; ++i) {
    mapper::MeasuredPoint p;
    p.v_o_volts = i;
    p.delta_a_volts = 2.0 * i;  // collinear commands
    p.tau_pitch_unm = i;
    ds.points.push_back(p);
  }
  CHECK_THROWS_AS(planar_fit(ds, Response::pitch_torque), std::invalid_argument);
}

TEST_CASE("cross correlation vanishes exactly on a decoupled noiseless grid") {
  Generator g;
  const auto ds = g.make(5);
  const auto cc = cross_correlation(ds);
  CHECK(std::abs(cc.roll_cmd_vs_pitch_torque) < 1e-12);
  CHECK(std::abs(cc.pitch_cmd_vs_roll_torque) < 1e-12);
}

TEST_CASE("null cross correlations stay small at bench noise") {
  const Generator g = paper_noise();
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto cc = cross_correlation(g.make(seed + 100));
    CHECK(std::abs(cc.roll_cmd_vs_pitch_torque) <= 0.1);
    CHECK(std::abs(cc.pitch_cmd_vs_roll_torque) <= 0.1);
  }
}

TEST_CASE("residual correlation detects a 0.1 uNm/V coupling") {
  Generator g = paper_noise();
  g.c_pr = 0.1;
  int detected = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto ds = g.make(seed + 200);
    const auto residual = cross_correlation_residual(ds);
    if (std::abs(residual.pitch_cmd_vs_roll_torque) > 0.3) ++detected;
    const auto plane = planar_fit(ds, Response::roll_torque);
    CHECK(std::abs(plane.c_pitch - 0.1) < 0.03);
  }
  CHECK(detected >= 18);
}

TEST_CASE("dispersion is zero for a noiseless dataset") {
  Generator g;
  const auto ds = g.make(6);
  const auto fits_p = axis_regression(ds, Axis::pitch);
  const auto fits_r = axis_regression(ds, Axis::roll);
  const auto disp = dispersion_stats(ds, fits_p, fits_r);
  CHECK(disp.n_inner == 9);
  CHECK(disp.sigma_inner_unm.pitch == doctest::Approx(0.0));
  CHECK(disp.sigma_inner_unm.roll == doctest::Approx(0.0));
  CHECK(disp.sigma_extreme_unm.pitch == doctest::Approx(0.0));
}

TEST_CASE("dispersion recovers the generator noise levels") {
  Generator g = paper_noise();
  g.extreme_sd = AxisPair{0.32, 3.46};
  double inner_p = 0, inner_r = 0, ext_p = 0, ext_r = 0;
  const int n_seeds = 100;
  for (std::uint64_t seed = 0; seed < n_seeds; ++seed) {
    const auto ds = g.make(seed + 300);
    const auto disp = dispersion_stats(ds, axis_regression(ds, Axis::pitch),
                                       axis_regression(ds, Axis::roll));
    inner_p += disp.sigma_inner_unm.pitch;
    inner_r += disp.sigma_inner_unm.roll;
    ext_p += disp.sigma_extreme_unm.pitch;
    ext_r += disp.sigma_extreme_unm.roll;
  }
  CHECK(inner_p / n_seeds == doctest::Approx(0.20).epsilon(0.15));
  CHECK(inner_r / n_seeds == doctest::Approx(0.77).epsilon(0.15));
  CHECK(ext_p / n_seeds == doctest::Approx(0.32).epsilon(0.15));
  CHECK(ext_r / n_seeds == doctest::Approx(3.46).epsilon(0.15));
}

TEST_CASE("dispersion statistics ignore row order") {
  Generator g = paper_noise();
  auto ds = g.make(7);
  const auto disp = dispersion_stats(ds, axis_regression(ds, Axis::pitch),
                                     axis_regression(ds, Axis::roll));
  std::mt19937 shuffler(99);
  std::shuffle(ds.points.begin(), ds.points.end(), shuffler);
  const auto shuffled = dispersion_stats(ds, axis_regression(ds, Axis::pitch),
                                         axis_regression(ds, Axis::roll));
  CHECK(disp.sigma_inner_unm.pitch == doctest::Approx(shuffled.sigma_inner_unm.pitch));
  CHECK(disp.sigma_extreme_unm.roll == doctest::Approx(shuffled.sigma_extreme_unm.roll));
}

TEST_CASE("dispersion requires the inner block") {
  Generator g;
  auto ds = g.make(8);
  for (auto& p : ds.points)
    if (std::abs(p.v_o_volts) <= 5 && std::abs(p.delta_a_volts) <= 5) p.excluded = true;
  CHECK_THROWS_AS(dispersion_stats(ds, axis_regression(ds, Axis::pitch),
                                   axis_regression(ds, Axis::roll)),
                  ModelError);
}

TEST_CASE("constant thrust yields zero deviation and slopes") {
  Generator g;
  g.thrust_pitch = 0.0;
  g.thrust_roll = 0.0;
  const auto ds = g.make(9);
  const auto ts = thrust_stats(ds);
  CHECK(ts.max_dev_fraction == doctest::Approx(0.0));
  CHECK(std::abs(ts.slope_pitch_mgf_per_v) < 1e-12);
  CHECK(std::abs(ts.slope_roll_mgf_per_v) < 1e-12);
}

TEST_CASE("noiseless thrust slopes are recovered exactly") {
  Generator g;
  const auto ts = thrust_stats(g.make(10));
  CHECK(ts.slope_pitch_mgf_per_v == doctest::Approx(-0.26).epsilon(1e-9));
  CHECK(ts.slope_roll_mgf_per_v == doctest::Approx(-0.16).epsilon(1e-9));
  CHECK(ts.mean_mgf == doctest::Approx(180.0).epsilon(1e-6));
}

TEST_CASE("bench-matched thrust deviation lands near the observed fraction") {
  const Generator g = paper_noise();
  double total = 0.0;
  const int n_seeds = 100;
  for (std::uint64_t seed = 0; seed < n_seeds; ++seed)
    total += thrust_stats(g.make(seed + 400)).max_dev_fraction;
  CHECK(total / n_seeds == doctest::Approx(0.058).epsilon(0.25));
}

TEST_CASE("trim consistency of a self-consistent noiseless plant is zero") {
  Generator g;
  const auto ds = g.make(11);
  const auto fit_p = axis_regression(ds, Axis::pitch);
  const auto fit_r = axis_regression(ds, Axis::roll);
  DispersionStats disp;
  disp.sigma_inner_unm = AxisPair{0.20, 0.77};

  TrimObservation obs;
  obs.label = "no_load";
  obs.trim.delta_a_v = -g.roll_bias / g.roll_slope;
  obs.trim.v_o_v = -g.pitch_bias / g.pitch_slope;
  const auto checks = trim_consistency(fit_p, fit_r, disp, {obs});
  REQUIRE(checks.size() == 2);
  for (const auto& c : checks) {
    CHECK(std::abs(c.deviation_torque_unm) < 1e-9);
    CHECK_FALSE(c.exceeds_sigma);
  }
}

TEST_CASE("a loaded trim predicts the shifted zero crossing") {
  Generator g;
  const auto ds = g.make(12);
  const auto fit_p = axis_regression(ds, Axis::pitch);
  const auto fit_r = axis_regression(ds, Axis::roll);
  DispersionStats disp;
  disp.sigma_inner_unm = AxisPair{0.20, 0.77};

  firmodel::OffsetLoad load{31.8, 4.0, Axis::roll, +1};
  const double tau = firmodel::offset_torque_unm(load);
  TrimObservation obs;
  obs.label = "roll_load";
  obs.load = load;
  obs.trim.delta_a_v = -(g.roll_bias + tau) / g.roll_slope;
  obs.trim.v_o_v = -g.pitch_bias / g.pitch_slope;
  const auto checks = trim_consistency(fit_p, fit_r, disp, {obs});
  for (const auto& c : checks) CHECK(std::abs(c.deviation_torque_unm) < 1e-9);
}

TEST_CASE("a 0.3 uNm trim offset exceeds sigma_pitch but not the tether budget") {
  Generator g;
  const auto ds = g.make(13);
  const auto fit_p = axis_regression(ds, Axis::pitch);
  const auto fit_r = axis_regression(ds, Axis::roll);
  DispersionStats disp;
  disp.sigma_inner_unm = AxisPair{0.20, 0.77};

  TrimObservation obs;
  obs.label = "offset_trim";
  obs.trim.v_o_v = -g.pitch_bias / g.pitch_slope + 0.3 / g.pitch_slope;
  obs.trim.delta_a_v = -g.roll_bias / g.roll_slope;
  const auto checks = trim_consistency(fit_p, fit_r, disp, {obs}, 0.3);
  bool found = false;
  for (const auto& c : checks) {
    if (c.axis != Axis::pitch) continue;
    found = true;
    CHECK(c.deviation_torque_unm == doctest::Approx(0.3).epsilon(1e-6));
    CHECK(c.exceeds_sigma);
    CHECK(c.within_tether_tolerance);
    CHECK(c.deviation_sigma == doctest::Approx(1.5).epsilon(1e-3));
  }
  CHECK(found);
}

TEST_CASE("trim consistency rejects zero slopes and empty inputs") {
  AxisFit flat;
  flat.slope_unm_per_v = 0.0;
  AxisFit ok;
  ok.slope_unm_per_v = 0.5;
  DispersionStats disp;
  TrimObservation obs;
  CHECK_THROWS_AS(trim_consistency(flat, ok, disp, {obs}), std::invalid_argument);
  CHECK_THROWS_AS(trim_consistency(ok, ok, disp, {}), std::invalid_argument);
}

TEST_CASE("planar null coefficients shrink with replication") {
  const Generator g = paper_noise();
  // Mean |c_roll| on the pitch response over k replicates behaves like
  // 1/sqrt(n); check the aggregated estimate tightens.
  auto mean_abs = [&](int n_seeds, std::uint64_t base) {
    double total = 0.0;
    for (int s = 0; s < n_seeds; ++s) {
      const auto plane = planar_fit(g.make(base + s), Response::pitch_torque);
      total += plane.c_roll;
    }
    return std::abs(total / n_seeds);
  };
  const double few = mean_abs(4, 500);
  const double many = mean_abs(64, 600);
  CHECK(many < few + 0.002);  // averaged estimate concentrates near zero
}

TEST_CASE("full analyze bundle populates every section") {
  Generator g = paper_noise();
  const auto ds = g.make(14);
  TrimObservation obs;
  obs.label = "no_load";
  obs.trim.delta_a_v = 17.0;
  obs.trim.v_o_v = -3.0;
  const auto report = analyze(ds, {obs});
  CHECK(report.pitch_fit.n == 73);
  CHECK(report.dispersion.n_inner == 9);
  CHECK(report.trim_checks.size() == 2);
  CHECK(report.thrust.mean_mgf == doctest::Approx(180.0).epsilon(0.01));
}
