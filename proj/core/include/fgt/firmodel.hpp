#pragma once

#include "fgt/rng.hpp"
#include "fgt/signalgen.hpp"
#include "fgt/types.hpp"
#include "fgt/units.hpp"

namespace fgt::firmodel {

/// Ground-truth character of one virtual robot: affine command-to-wrench
/// maps plus biases, cross-coupling, regime-dependent dispersion, wear
/// drift, and an optional cubic roll-off at large commands.
///
/// Dispersion switches from the inner to the extreme level when either
/// command magnitude exceeds extreme_threshold_fraction of its configured
/// range, matching the elevated variability observed at full-scale commands.
struct FirCharacter {
  double pitch_slope_unm_per_v = 0.13;   // s_p, torque per offset volt
  double roll_slope_unm_per_v = 0.49;    // s_r, torque per amplitude-difference volt
  double pitch_bias_unm = 0.39;
  double roll_bias_unm = -8.33;

  double thrust_at_baseline_mgf = 180.0;
  double thrust_pitch_slope_mgf_per_v = -0.26;
  double thrust_roll_slope_mgf_per_v = -0.16;

  double coupling_roll_to_pitch_unm_per_v = 0.0;  // c_rp, pitch torque per dA volt
  double coupling_pitch_to_roll_unm_per_v = 0.0;  // c_pr, roll torque per V_o volt

  AxisPair inner_noise_sd_unm{0.20, 0.77};
  AxisPair extreme_noise_sd_unm{0.20, 0.77};
  double thrust_noise_sd_mgf = 2.0;
  double extreme_threshold_fraction = 0.99;
  double pitch_command_range_v = 15.0;
  double roll_command_range_v = 25.0;

  AxisPair wear_drift_rate_unm_per_s{0.0, 0.0};  // bias drift per flapping second
  AxisPair cubic_unm_per_v3{0.0, 0.0};           // transmission saturation, default off
  double thrust_scale = 1.0;                     // degraded-actuator knob
  double mass_mg = 180.0;

  void validate() const;
};

struct Wrench {
  double tau_pitch_unm = 0.0;
  double tau_roll_unm = 0.0;
  double thrust_mgf = 0.0;
};

/// Deterministic part of the stroke-averaged wrench (no dispersion draw).
Wrench mean_wrench(const FirCharacter& character, const signalgen::DriveCommand& cmd,
                   double flap_time_s);

/// Stroke-averaged wrench with the dispersion draw applied. Rejects commands
/// that are not rail-feasible.
Wrench stroke_avg_wrench(const FirCharacter& character, const signalgen::DriveCommand& cmd,
                         double flap_time_s, Rng& rng);

/// A known offset mass on a rod, used to apply a known torque about one axis.
struct OffsetLoad {
  double mass_mg = 0.0;
  double lever_mm = 0.0;
  Axis axis = Axis::roll;
  int sign = +1;

  void validate() const;
};

/// tau = sign * m g l, in uNm.
double offset_torque_unm(const OffsetLoad& load, double gravity_m_s2 = units::kStandardGravity);

/// Cumulative flapping time; drift is linear in it.
struct WearState {
  double flap_time_s = 0.0;
};

WearState advance_wear(WearState state, double flap_seconds);

/// Per-axis bias drift accumulated after flap_time_s of flapping.
AxisPair wear_drift_unm(const FirCharacter& character, double flap_time_s);

}  // namespace fgt::firmodel
