#include "fgt/scenario.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include <json.hpp>

#include "fgt/error.hpp"

namespace fgt::scenario {

using nlohmann::json;

const FlyEntry& ScenarioConfig::active() const {
  const auto it = flies.find(active_fly);
  if (it == flies.end())
    throw ConfigError("active_fly '" + active_fly + "' is not defined in flies");
  return it->second;
}

void ScenarioConfig::validate() const {
  if (flies.empty()) throw ConfigError("scenario defines no flies");
  try {
    active().character.validate();
    gimbal_pitch.validate();
    gimbal_roll.validate();
    mocap.validate();
    balance.validate();
    mapper::SweepSpec effective = sweep;
    effective.baseline_amplitude_v = active().baseline_amplitude_v;
    effective.validate();
    trim.validate();
    for (const auto& load : calibration.loads) load.validate();
    for (const auto& load : validation.loads) load.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (calibration.loads.size() < 6)
    throw ConfigError("calibration needs at least 3 loads per axis");
  if (!(calibration.window_s > 0.0)) throw ConfigError("calibration window must be > 0");
  if (!(step_response.duration_s > 0.0) || !(step_response.dt_s > 0.0))
    throw ConfigError("step_response durations must be > 0");
  if (supported_mass_mg < 0.0) throw ConfigError("supported mass must be >= 0");
  if (validation.tether_tolerance_unm < 0.0)
    throw ConfigError("tether tolerance must be >= 0");
}

namespace {

// One gimbal axis hitting a target total stiffness (given per degree) with a
// slow time constant of tau_slow seconds and a fast pole near 20 ms.
gimbalsim::GimbalParams make_axis(double ks_unm_per_deg, double tau_slow_s) {
  gimbalsim::GimbalParams p;
  p.counterweight_mass_mg = 50.0;
  p.counterweight_lever_mm = 17.0;
  p.robot_mass_mg = 180.0;
  p.robot_com_offset_mm = 0.0;
  p.gravity_m_s2 = units::kStandardGravity;

  const double ks_per_rad = ks_unm_per_deg * 180.0 / std::numbers::pi;
  const double pendulum = units::nm_to_unm(units::mg_to_kg(p.counterweight_mass_mg) *
                                           p.gravity_m_s2 *
                                           units::mm_to_m(p.counterweight_lever_mm));
  p.flexure_stiffness_unm_per_rad = ks_per_rad - pendulum;
  p.damping_unm_s_per_rad = tau_slow_s * ks_per_rad;
  p.inertia_mg_mm2 = 0.02 * p.damping_unm_s_per_rad * 1e6;  // uNm s^2 -> mg mm^2
  return p;
}

}  // namespace

ScenarioConfig paper_scenario() {
  ScenarioConfig config;
  config.seed = 2026;
  config.output_dir = "out";
  config.supported_mass_mg = 12000.0;

  config.gimbal_pitch = make_axis(1.88, 3.3);
  config.gimbal_roll = make_axis(1.52, 3.7);

  // Mapping fly: the FirCharacter defaults already describe it.
  FlyEntry mapping;
  mapping.baseline_amplitude_v = 192.0;
  config.flies["mapping"] = mapping;

  FlyEntry validation_fly;
  validation_fly.baseline_amplitude_v = 168.0;
  auto& vc = validation_fly.character;
  vc.pitch_slope_unm_per_v = 0.11;
  vc.roll_slope_unm_per_v = 0.38;
  vc.pitch_bias_unm = -0.825;  // trims at V_o = +7.5 V
  vc.roll_bias_unm = 3.8;      // trims at dA = -10 V
  // Bias drift matched to the trim change observed across one full mapping
  // session (73 points x 3 s of flapping).
  const double session_s = 73.0 * 3.0;
  vc.wear_drift_rate_unm_per_s = AxisPair{0.275 / session_s, 0.57 / session_s};
  config.flies["validation"] = validation_fly;

  config.active_fly = "mapping";

  config.sweep = mapper::SweepSpec{};  // default grid, 3 s / 0.5 s protocol

  config.calibration.window_s = 1.0;
  for (Axis axis : {Axis::pitch, Axis::roll}) {
    for (double mass : {12.7, 31.8, 51.0}) {
      for (int sign : {+1, -1}) {
        firmodel::OffsetLoad load;
        load.mass_mg = mass;
        load.lever_mm = 4.0;
        load.axis = axis;
        load.sign = sign;
        config.calibration.loads.push_back(load);
      }
    }
  }

  config.step_response = StepResponseSpec{};
  config.trim = mapper::TrimConfig{};
  config.trim_before_sweep = true;

  firmodel::OffsetLoad roll_load;
  roll_load.mass_mg = 31.8;
  roll_load.lever_mm = 4.0;
  roll_load.axis = Axis::roll;
  roll_load.sign = +1;
  firmodel::OffsetLoad pitch_load;
  pitch_load.mass_mg = 25.0;
  pitch_load.lever_mm = 4.0;
  pitch_load.axis = Axis::pitch;
  pitch_load.sign = -1;
  config.validation.loads = {roll_load, pitch_load};
  config.validation.tether_tolerance_unm = 0.3;
  config.validation.reported_load_trim_shift_v = 1.5;

  return config;
}

namespace {

// --- strict JSON helpers ------------------------------------------------

[[noreturn]] void fail(const std::string& context, const std::string& message) {
  throw ConfigError(context + ": " + message);
}

const json& member(const json& j, const std::string& context, const std::string& key) {
  if (!j.is_object()) fail(context, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) fail(context, "missing key '" + key + "'");
  return *it;
}

double get_number(const json& j, const std::string& context, const std::string& key) {
  const json& v = member(j, context, key);
  if (!v.is_number()) fail(context, "key '" + key + "' must be a number");
  return v.get<double>();
}

bool get_bool(const json& j, const std::string& context, const std::string& key) {
  const json& v = member(j, context, key);
  if (!v.is_boolean()) fail(context, "key '" + key + "' must be a boolean");
  return v.get<bool>();
}

std::string get_string(const json& j, const std::string& context, const std::string& key) {
  const json& v = member(j, context, key);
  if (!v.is_string()) fail(context, "key '" + key + "' must be a string");
  return v.get<std::string>();
}

void check_keys(const json& j, const std::string& context,
                std::initializer_list<const char*> allowed) {
  for (const auto& [key, _] : j.items()) {
    bool known = false;
    for (const char* a : allowed)
      if (key == a) {
        known = true;
        break;
      }
    if (!known) fail(context, "unknown key '" + key + "'");
  }
}

std::vector<double> get_number_list(const json& j, const std::string& context,
                                    const std::string& key) {
  const json& v = member(j, context, key);
  if (!v.is_array()) fail(context, "key '" + key + "' must be an array");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) fail(context, "key '" + key + "' must hold numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

// --- per-struct serialization --------------------------------------------

json axis_pair_to_json(const AxisPair& p) {
  return json{{"pitch", p.pitch}, {"roll", p.roll}};
}

AxisPair axis_pair_from_json(const json& j, const std::string& context) {
  check_keys(j, context, {"pitch", "roll"});
  return AxisPair{get_number(j, context, "pitch"), get_number(j, context, "roll")};
}

json fir_to_json(const firmodel::FirCharacter& c) {
  return json{
      {"pitch_slope_uNm_per_v", c.pitch_slope_unm_per_v},
      {"roll_slope_uNm_per_v", c.roll_slope_unm_per_v},
      {"pitch_bias_uNm", c.pitch_bias_unm},
      {"roll_bias_uNm", c.roll_bias_unm},
      {"thrust_at_baseline_mgf", c.thrust_at_baseline_mgf},
      {"thrust_pitch_slope_mgf_per_v", c.thrust_pitch_slope_mgf_per_v},
      {"thrust_roll_slope_mgf_per_v", c.thrust_roll_slope_mgf_per_v},
      {"coupling_roll_to_pitch_uNm_per_v", c.coupling_roll_to_pitch_unm_per_v},
      {"coupling_pitch_to_roll_uNm_per_v", c.coupling_pitch_to_roll_unm_per_v},
      {"inner_noise_sd_uNm", axis_pair_to_json(c.inner_noise_sd_unm)},
      {"extreme_noise_sd_uNm", axis_pair_to_json(c.extreme_noise_sd_unm)},
      {"thrust_noise_sd_mgf", c.thrust_noise_sd_mgf},
      {"extreme_threshold_fraction", c.extreme_threshold_fraction},
      {"pitch_command_range_v", c.pitch_command_range_v},
      {"roll_command_range_v", c.roll_command_range_v},
      {"wear_drift_rate_uNm_per_s", axis_pair_to_json(c.wear_drift_rate_unm_per_s)},
      {"cubic_uNm_per_v3", axis_pair_to_json(c.cubic_unm_per_v3)},
      {"thrust_scale", c.thrust_scale},
      {"mass_mg", c.mass_mg},
  };
}

firmodel::FirCharacter fir_from_json(const json& j, const std::string& ctx) {
  check_keys(j, ctx,
             {"pitch_slope_uNm_per_v", "roll_slope_uNm_per_v", "pitch_bias_uNm",
              "roll_bias_uNm", "thrust_at_baseline_mgf", "thrust_pitch_slope_mgf_per_v",
              "thrust_roll_slope_mgf_per_v", "coupling_roll_to_pitch_uNm_per_v",
              "coupling_pitch_to_roll_uNm_per_v", "inner_noise_sd_uNm",
              "extreme_noise_sd_uNm", "thrust_noise_sd_mgf", "extreme_threshold_fraction",
              "pitch_command_range_v", "roll_command_range_v", "wear_drift_rate_uNm_per_s",
              "cubic_uNm_per_v3", "thrust_scale", "mass_mg"});
  firmodel::FirCharacter c;
  c.pitch_slope_unm_per_v = get_number(j, ctx, "pitch_slope_uNm_per_v");
  c.roll_slope_unm_per_v = get_number(j, ctx, "roll_slope_uNm_per_v");
  c.pitch_bias_unm = get_number(j, ctx, "pitch_bias_uNm");
  c.roll_bias_unm = get_number(j, ctx, "roll_bias_uNm");
  c.thrust_at_baseline_mgf = get_number(j, ctx, "thrust_at_baseline_mgf");
  c.thrust_pitch_slope_mgf_per_v = get_number(j, ctx, "thrust_pitch_slope_mgf_per_v");
  c.thrust_roll_slope_mgf_per_v = get_number(j, ctx, "thrust_roll_slope_mgf_per_v");
  c.coupling_roll_to_pitch_unm_per_v =
      get_number(j, ctx, "coupling_roll_to_pitch_uNm_per_v");
  c.coupling_pitch_to_roll_unm_per_v =
      get_number(j, ctx, "coupling_pitch_to_roll_uNm_per_v");
  c.inner_noise_sd_unm =
      axis_pair_from_json(member(j, ctx, "inner_noise_sd_uNm"), ctx + ".inner_noise_sd_uNm");
  c.extreme_noise_sd_unm = axis_pair_from_json(member(j, ctx, "extreme_noise_sd_uNm"),
                                               ctx + ".extreme_noise_sd_uNm");
  c.thrust_noise_sd_mgf = get_number(j, ctx, "thrust_noise_sd_mgf");
  c.extreme_threshold_fraction = get_number(j, ctx, "extreme_threshold_fraction");
  c.pitch_command_range_v = get_number(j, ctx, "pitch_command_range_v");
  c.roll_command_range_v = get_number(j, ctx, "roll_command_range_v");
  c.wear_drift_rate_unm_per_s = axis_pair_from_json(
      member(j, ctx, "wear_drift_rate_uNm_per_s"), ctx + ".wear_drift_rate_uNm_per_s");
  c.cubic_unm_per_v3 =
      axis_pair_from_json(member(j, ctx, "cubic_uNm_per_v3"), ctx + ".cubic_uNm_per_v3");
  c.thrust_scale = get_number(j, ctx, "thrust_scale");
  c.mass_mg = get_number(j, ctx, "mass_mg");
  return c;
}

json gimbal_to_json(const gimbalsim::GimbalParams& p) {
  return json{
      {"counterweight_mass_mg", p.counterweight_mass_mg},
      {"counterweight_lever_mm", p.counterweight_lever_mm},
      {"robot_mass_mg", p.robot_mass_mg},
      {"robot_com_offset_mm", p.robot_com_offset_mm},
      {"flexure_stiffness_uNm_per_rad", p.flexure_stiffness_unm_per_rad},
      {"damping_uNm_s_per_rad", p.damping_unm_s_per_rad},
      {"inertia_mg_mm2", p.inertia_mg_mm2},
      {"gravity_m_per_s2", p.gravity_m_s2},
  };
}

gimbalsim::GimbalParams gimbal_from_json(const json& j, const std::string& ctx) {
  check_keys(j, ctx,
             {"counterweight_mass_mg", "counterweight_lever_mm", "robot_mass_mg",
              "robot_com_offset_mm", "flexure_stiffness_uNm_per_rad",
              "damping_uNm_s_per_rad", "inertia_mg_mm2", "gravity_m_per_s2"});
  gimbalsim::GimbalParams p;
  p.counterweight_mass_mg = get_number(j, ctx, "counterweight_mass_mg");
  p.counterweight_lever_mm = get_number(j, ctx, "counterweight_lever_mm");
  p.robot_mass_mg = get_number(j, ctx, "robot_mass_mg");
  p.robot_com_offset_mm = get_number(j, ctx, "robot_com_offset_mm");
  p.flexure_stiffness_unm_per_rad = get_number(j, ctx, "flexure_stiffness_uNm_per_rad");
  p.damping_unm_s_per_rad = get_number(j, ctx, "damping_uNm_s_per_rad");
  p.inertia_mg_mm2 = get_number(j, ctx, "inertia_mg_mm2");
  p.gravity_m_s2 = get_number(j, ctx, "gravity_m_per_s2");
  return p;
}

json load_to_json(const firmodel::OffsetLoad& load) {
  return json{{"mass_mg", load.mass_mg},
              {"lever_mm", load.lever_mm},
              {"axis", axis_name(load.axis)},
              {"sign", load.sign}};
}

firmodel::OffsetLoad load_from_json(const json& j, const std::string& ctx) {
  check_keys(j, ctx, {"mass_mg", "lever_mm", "axis", "sign"});
  firmodel::OffsetLoad load;
  load.mass_mg = get_number(j, ctx, "mass_mg");
  load.lever_mm = get_number(j, ctx, "lever_mm");
  const std::string axis = get_string(j, ctx, "axis");
  if (axis == "pitch")
    load.axis = Axis::pitch;
  else if (axis == "roll")
    load.axis = Axis::roll;
  else
    fail(ctx, "axis must be 'pitch' or 'roll'");
  const double sign = get_number(j, ctx, "sign");
  if (sign != 1.0 && sign != -1.0) fail(ctx, "sign must be +1 or -1");
  load.sign = static_cast<int>(sign);
  return load;
}

json sweep_to_json(const mapper::SweepSpec& s) {
  return json{
      {"pitch_levels_v", s.pitch_levels_v},
      {"roll_levels_v", s.roll_levels_v},
      {"settle_duration_s", s.settle_duration_s},
      {"average_window_s", s.average_window_s},
      {"bias_voltage_v", s.bias_voltage_v},
      {"flap_frequency_hz", s.flap_frequency_hz},
      {"rail_margin_v", s.rail_margin_v},
      {"integrator_dt_s", s.integrator_dt_s},
  };
}

mapper::SweepSpec sweep_from_json(const json& j, const std::string& ctx,
                                  double baseline_amplitude_v) {
  check_keys(j, ctx,
             {"pitch_levels_v", "roll_levels_v", "settle_duration_s", "average_window_s",
              "bias_voltage_v", "flap_frequency_hz", "rail_margin_v", "integrator_dt_s"});
  mapper::SweepSpec s;
  s.pitch_levels_v = get_number_list(j, ctx, "pitch_levels_v");
  s.roll_levels_v = get_number_list(j, ctx, "roll_levels_v");
  s.settle_duration_s = get_number(j, ctx, "settle_duration_s");
  s.average_window_s = get_number(j, ctx, "average_window_s");
  s.baseline_amplitude_v = baseline_amplitude_v;
  s.bias_voltage_v = get_number(j, ctx, "bias_voltage_v");
  s.flap_frequency_hz = get_number(j, ctx, "flap_frequency_hz");
  s.rail_margin_v = get_number(j, ctx, "rail_margin_v");
  s.integrator_dt_s = get_number(j, ctx, "integrator_dt_s");
  return s;
}

json trim_to_json(const mapper::TrimConfig& t) {
  return json{
      {"step_v", t.step_v},
      {"tolerance_uNm", t.tolerance_unm},
      {"observation_noise_sd_uNm", t.observation_noise_sd_unm},
      {"observations_per_update", t.observations_per_update},
      {"max_iterations", t.max_iterations},
      {"start_delta_a_v", t.start_delta_a_v},
      {"start_v_o_v", t.start_v_o_v},
  };
}

mapper::TrimConfig trim_from_json(const json& j, const std::string& ctx) {
  check_keys(j, ctx,
             {"step_v", "tolerance_uNm", "observation_noise_sd_uNm",
              "observations_per_update", "max_iterations", "start_delta_a_v",
              "start_v_o_v"});
  mapper::TrimConfig t;
  t.step_v = get_number(j, ctx, "step_v");
  t.tolerance_unm = get_number(j, ctx, "tolerance_uNm");
  t.observation_noise_sd_unm = get_number(j, ctx, "observation_noise_sd_uNm");
  t.observations_per_update = static_cast<int>(get_number(j, ctx, "observations_per_update"));
  t.max_iterations = static_cast<int>(get_number(j, ctx, "max_iterations"));
  t.start_delta_a_v = get_number(j, ctx, "start_delta_a_v");
  t.start_v_o_v = get_number(j, ctx, "start_v_o_v");
  return t;
}

json scenario_to_json(const ScenarioConfig& c) {
  json flies;
  for (const auto& [name, fly] : c.flies) {
    flies[name] = json{{"baseline_amplitude_v", fly.baseline_amplitude_v},
                       {"character", fir_to_json(fly.character)}};
  }
  json calibration_loads = json::array();
  for (const auto& load : c.calibration.loads) calibration_loads.push_back(load_to_json(load));
  json validation_loads = json::array();
  for (const auto& load : c.validation.loads) validation_loads.push_back(load_to_json(load));

  return json{
      {"seed", c.seed},
      {"output_dir", c.output_dir},
      {"supported_mass_mg", c.supported_mass_mg},
      {"active_fly", c.active_fly},
      {"flies", flies},
      {"gimbal",
       json{{"pitch", gimbal_to_json(c.gimbal_pitch)},
            {"roll", gimbal_to_json(c.gimbal_roll)}}},
      {"mocap",
       json{{"frame_rate_hz", c.mocap.frame_rate_hz},
            {"marker_separation_mm", c.mocap.marker_separation_mm},
            {"marker_position_sd_mm", c.mocap.marker_position_sd_mm}}},
      {"balance",
       json{{"report_rate_hz", c.balance.report_rate_hz},
            {"reading_sd_mg", c.balance.reading_sd_mg},
            {"tare_mg", c.balance.tare_mg}}},
      {"sweep", sweep_to_json(c.sweep)},
      {"calibration",
       json{{"window_s", c.calibration.window_s}, {"loads", calibration_loads}}},
      {"step_response",
       json{{"initial_angles_deg", c.step_response.initial_angles_deg},
            {"duration_s", c.step_response.duration_s},
            {"dt_s", c.step_response.dt_s},
            {"reference_time_constant_band_s", c.step_response.reference_time_constant_band_s},
            {"reference_bandwidth_band_hz", c.step_response.reference_bandwidth_band_hz},
            {"reference_cutoff_hz", c.step_response.reference_cutoff_hz}}},
      {"trim", trim_to_json(c.trim)},
      {"trim_before_sweep", c.trim_before_sweep},
      {"validation",
       json{{"loads", validation_loads},
            {"tether_tolerance_uNm", c.validation.tether_tolerance_unm},
            {"reported_load_trim_shift_v", c.validation.reported_load_trim_shift_v}}},
  };
}

ScenarioConfig scenario_from_json(const json& j) {
  check_keys(j, "scenario",
             {"seed", "output_dir", "supported_mass_mg", "active_fly", "flies", "gimbal",
              "mocap", "balance", "sweep", "calibration", "step_response", "trim",
              "trim_before_sweep", "validation"});
  ScenarioConfig c;
  c.seed = static_cast<std::uint64_t>(get_number(j, "scenario", "seed"));
  c.output_dir = get_string(j, "scenario", "output_dir");
  c.supported_mass_mg = get_number(j, "scenario", "supported_mass_mg");
  c.active_fly = get_string(j, "scenario", "active_fly");

  const json& flies = member(j, "scenario", "flies");
  if (!flies.is_object() || flies.empty()) fail("scenario.flies", "expected entries");
  for (const auto& [name, entry] : flies.items()) {
    const std::string ctx = "flies." + name;
    check_keys(entry, ctx, {"baseline_amplitude_v", "character"});
    FlyEntry fly;
    fly.baseline_amplitude_v = get_number(entry, ctx, "baseline_amplitude_v");
    fly.character = fir_from_json(member(entry, ctx, "character"), ctx + ".character");
    c.flies[name] = fly;
  }

  const json& gimbal = member(j, "scenario", "gimbal");
  check_keys(gimbal, "gimbal", {"pitch", "roll"});
  c.gimbal_pitch = gimbal_from_json(member(gimbal, "gimbal", "pitch"), "gimbal.pitch");
  c.gimbal_roll = gimbal_from_json(member(gimbal, "gimbal", "roll"), "gimbal.roll");

  const json& mocap = member(j, "scenario", "mocap");
  check_keys(mocap, "mocap", {"frame_rate_hz", "marker_separation_mm", "marker_position_sd_mm"});
  c.mocap.frame_rate_hz = get_number(mocap, "mocap", "frame_rate_hz");
  c.mocap.marker_separation_mm = get_number(mocap, "mocap", "marker_separation_mm");
  c.mocap.marker_position_sd_mm = get_number(mocap, "mocap", "marker_position_sd_mm");

  const json& balance = member(j, "scenario", "balance");
  check_keys(balance, "balance", {"report_rate_hz", "reading_sd_mg", "tare_mg"});
  c.balance.report_rate_hz = get_number(balance, "balance", "report_rate_hz");
  c.balance.reading_sd_mg = get_number(balance, "balance", "reading_sd_mg");
  c.balance.tare_mg = get_number(balance, "balance", "tare_mg");

  // Sweep baseline amplitude is resolved from the active fly after parsing.
  c.sweep = sweep_from_json(member(j, "scenario", "sweep"), "sweep", 0.0);

  const json& calibration = member(j, "scenario", "calibration");
  check_keys(calibration, "calibration", {"window_s", "loads"});
  c.calibration.window_s = get_number(calibration, "calibration", "window_s");
  const json& cal_loads = member(calibration, "calibration", "loads");
  if (!cal_loads.is_array()) fail("calibration.loads", "expected an array");
  for (const auto& load : cal_loads)
    c.calibration.loads.push_back(load_from_json(load, "calibration.loads[]"));

  const json& step = member(j, "scenario", "step_response");
  check_keys(step, "step_response",
             {"initial_angles_deg", "duration_s", "dt_s", "reference_time_constant_band_s",
              "reference_bandwidth_band_hz", "reference_cutoff_hz"});
  c.step_response.initial_angles_deg = get_number_list(step, "step_response", "initial_angles_deg");
  c.step_response.duration_s = get_number(step, "step_response", "duration_s");
  c.step_response.dt_s = get_number(step, "step_response", "dt_s");
  auto band = get_number_list(step, "step_response", "reference_time_constant_band_s");
  if (band.size() != 2) fail("step_response", "reference_time_constant_band_s needs 2 values");
  c.step_response.reference_time_constant_band_s = {band[0], band[1]};
  band = get_number_list(step, "step_response", "reference_bandwidth_band_hz");
  if (band.size() != 2) fail("step_response", "reference_bandwidth_band_hz needs 2 values");
  c.step_response.reference_bandwidth_band_hz = {band[0], band[1]};
  c.step_response.reference_cutoff_hz = get_number(step, "step_response", "reference_cutoff_hz");

  c.trim = trim_from_json(member(j, "scenario", "trim"), "trim");
  c.trim_before_sweep = get_bool(j, "scenario", "trim_before_sweep");

  const json& validation = member(j, "scenario", "validation");
  check_keys(validation, "validation",
             {"loads", "tether_tolerance_uNm", "reported_load_trim_shift_v"});
  const json& val_loads = member(validation, "validation", "loads");
  if (!val_loads.is_array()) fail("validation.loads", "expected an array");
  for (const auto& load : val_loads)
    c.validation.loads.push_back(load_from_json(load, "validation.loads[]"));
  c.validation.tether_tolerance_unm = get_number(validation, "validation", "tether_tolerance_uNm");
  c.validation.reported_load_trim_shift_v =
      get_number(validation, "validation", "reported_load_trim_shift_v");

  c.sweep.baseline_amplitude_v = c.active().baseline_amplitude_v;
  return c;
}

}  // namespace

ScenarioConfig load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config parse error in " + path.string() + ": " + e.what());
  }
  ScenarioConfig config = scenario_from_json(j);
  config.validate();
  return config;
}

void save(const ScenarioConfig& config, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write config file: " + path.string());
  out << scenario_to_json(config).dump(2) << '\n';
}

std::string to_json_string(const ScenarioConfig& config) {
  return scenario_to_json(config).dump();
}

std::uint64_t config_hash(const ScenarioConfig& config) {
  // Hash the experiment definition only; where the outputs land is not part
  // of it.
  ScenarioConfig canonical = config;
  canonical.output_dir.clear();
  // FNV-1a, stable across runs and platforms.
  const std::string s = to_json_string(canonical);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

mapper::PlantBundle plant_bundle(const ScenarioConfig& config) {
  mapper::PlantBundle plant;
  plant.fir = config.active().character;
  plant.gimbal_pitch = config.gimbal_pitch;
  plant.gimbal_roll = config.gimbal_roll;
  plant.mocap = config.mocap;
  plant.balance = config.balance;
  plant.supported_mass_mg = config.supported_mass_mg;
  return plant;
}

signalgen::DriveCommand baseline_command(const ScenarioConfig& config) {
  mapper::SweepSpec spec = config.sweep;
  spec.baseline_amplitude_v = config.active().baseline_amplitude_v;
  return mapper::command_for(spec, 0.0, 0.0);
}

}  // namespace fgt::scenario
