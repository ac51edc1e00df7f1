#include "fgt/firmodel.hpp"

#include <cmath>
#include <stdexcept>

#include "fgt/error.hpp"

namespace fgt::firmodel {

void FirCharacter::validate() const {
  if (!(pitch_slope_unm_per_v > 0.0) || !(roll_slope_unm_per_v > 0.0))
    throw std::invalid_argument("FirCharacter: torque slopes must be > 0");
  if (!(thrust_at_baseline_mgf > 0.0))
    throw std::invalid_argument("FirCharacter: baseline thrust must be > 0");
  if (inner_noise_sd_unm.pitch < 0.0 || inner_noise_sd_unm.roll < 0.0 ||
      extreme_noise_sd_unm.pitch < 0.0 || extreme_noise_sd_unm.roll < 0.0 ||
      thrust_noise_sd_mgf < 0.0)
    throw std::invalid_argument("FirCharacter: noise SDs must be >= 0");
  if (extreme_noise_sd_unm.pitch < inner_noise_sd_unm.pitch ||
      extreme_noise_sd_unm.roll < inner_noise_sd_unm.roll)
    throw std::invalid_argument(
        "FirCharacter: extreme noise SD must be >= inner noise SD");
  if (!(extreme_threshold_fraction > 0.0) || extreme_threshold_fraction > 1.0)
    throw std::invalid_argument(
        "FirCharacter: extreme threshold fraction must be in (0, 1]");
  if (!(pitch_command_range_v > 0.0) || !(roll_command_range_v > 0.0))
    throw std::invalid_argument("FirCharacter: command ranges must be > 0");
  if (mass_mg < 0.0) throw std::invalid_argument("FirCharacter: mass must be >= 0");
}

Wrench mean_wrench(const FirCharacter& c, const signalgen::DriveCommand& cmd,
                   double flap_time_s) {
  if (flap_time_s < 0.0)
    throw std::invalid_argument("mean_wrench: flapping time must be >= 0");
  const double v_o = cmd.offset_voltage_v;
  const double d_a = cmd.amplitude_difference_v;
  const AxisPair drift = wear_drift_unm(c, flap_time_s);

  Wrench w;
  w.tau_pitch_unm = c.pitch_slope_unm_per_v * v_o + c.pitch_bias_unm +
                    c.coupling_roll_to_pitch_unm_per_v * d_a + drift.pitch -
                    c.cubic_unm_per_v3.pitch * v_o * v_o * v_o;
  w.tau_roll_unm = c.roll_slope_unm_per_v * d_a + c.roll_bias_unm +
                   c.coupling_pitch_to_roll_unm_per_v * v_o + drift.roll -
                   c.cubic_unm_per_v3.roll * d_a * d_a * d_a;
  w.thrust_mgf = (c.thrust_at_baseline_mgf + c.thrust_pitch_slope_mgf_per_v * v_o +
                  c.thrust_roll_slope_mgf_per_v * d_a) *
                 c.thrust_scale;
  return w;
}

Wrench stroke_avg_wrench(const FirCharacter& c, const signalgen::DriveCommand& cmd,
                         double flap_time_s, Rng& rng) {
  c.validate();
  if (!signalgen::rail_feasible(cmd).feasible)
    throw ModelError("stroke_avg_wrench: command is not rail-feasible");

  Wrench w = mean_wrench(c, cmd, flap_time_s);

  const bool extreme =
      std::abs(cmd.offset_voltage_v) >
          c.extreme_threshold_fraction * c.pitch_command_range_v ||
      std::abs(cmd.amplitude_difference_v) >
          c.extreme_threshold_fraction * c.roll_command_range_v;
  const AxisPair& sd = extreme ? c.extreme_noise_sd_unm : c.inner_noise_sd_unm;

  w.tau_pitch_unm += rng.gaussian(0.0, sd.pitch);
  w.tau_roll_unm += rng.gaussian(0.0, sd.roll);
  w.thrust_mgf += c.thrust_scale * rng.gaussian(0.0, c.thrust_noise_sd_mgf);
  return w;
}

void OffsetLoad::validate() const {
  if (mass_mg < 0.0 || lever_mm < 0.0)
    throw std::invalid_argument("OffsetLoad: mass and lever must be >= 0");
  if (sign != 1 && sign != -1)
    throw std::invalid_argument("OffsetLoad: sign must be +1 or -1");
}

double offset_torque_unm(const OffsetLoad& load, double gravity_m_s2) {
  load.validate();
  return static_cast<double>(load.sign) *
         units::nm_to_unm(units::mg_to_kg(load.mass_mg) * gravity_m_s2 *
                          units::mm_to_m(load.lever_mm));
}

WearState advance_wear(WearState state, double flap_seconds) {
  if (flap_seconds < 0.0)
    throw std::invalid_argument("advance_wear: flapping time must be >= 0");
  state.flap_time_s += flap_seconds;
  return state;
}

AxisPair wear_drift_unm(const FirCharacter& c, double flap_time_s) {
  return {c.wear_drift_rate_unm_per_s.pitch * flap_time_s,
          c.wear_drift_rate_unm_per_s.roll * flap_time_s};
}

}  // namespace fgt::firmodel
