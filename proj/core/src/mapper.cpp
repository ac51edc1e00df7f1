#include "fgt/mapper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>

#include "fgt/csv.hpp"
#include "fgt/error.hpp"

namespace fgt::mapper {

void SweepSpec::validate() const {
  if (pitch_levels_v.empty() || roll_levels_v.empty())
    throw std::invalid_argument("SweepSpec: command levels must be nonempty");
  if (!(settle_duration_s > 0.0) || !(average_window_s > 0.0))
    throw std::invalid_argument("SweepSpec: durations must be > 0");
  if (!(average_window_s < settle_duration_s))
    throw std::invalid_argument("SweepSpec: average window must be shorter than settle");
  if (!(integrator_dt_s > 0.0))
    throw std::invalid_argument("SweepSpec: integrator dt must be > 0");
  if (rail_margin_v < 0.0)
    throw std::invalid_argument("SweepSpec: rail margin must be >= 0");
  for (double da : roll_levels_v)
    if (std::abs(da) > baseline_amplitude_v)
      throw std::invalid_argument(
          "SweepSpec: roll level exceeds the baseline amplitude");
  // The shared waveform parameters must themselves form a valid command.
  command_for(*this, 0.0, 0.0).validate();
}

void PlantBundle::validate() const {
  fir.validate();
  gimbal_pitch.validate();
  gimbal_roll.validate();
  mocap.validate();
  balance.validate();
  if (supported_mass_mg < 0.0)
    throw std::invalid_argument("PlantBundle: supported mass must be >= 0");
}

signalgen::DriveCommand command_for(const SweepSpec& spec, double v_o_volts,
                                    double delta_a_volts) {
  signalgen::DriveCommand cmd;
  cmd.bias_voltage_v = spec.bias_voltage_v;
  cmd.baseline_amplitude_v = spec.baseline_amplitude_v;
  cmd.amplitude_difference_v = delta_a_volts;
  cmd.offset_voltage_v = v_o_volts;
  cmd.flap_frequency_hz = spec.flap_frequency_hz;
  cmd.duration_s = spec.settle_duration_s;
  return cmd;
}

namespace {
constexpr std::uint64_t kChannelFir = 0x11;
constexpr std::uint64_t kChannelMocapPitch = 0x22;
constexpr std::uint64_t kChannelMocapRoll = 0x33;
constexpr std::uint64_t kChannelBalance = 0x44;
}  // namespace

PointRngs point_rngs(std::uint64_t seed, std::uint64_t domain, std::uint64_t index) {
  const std::uint64_t base = derive_stream(seed, domain, index);
  return PointRngs{Rng(derive_stream(base, kChannelFir)),
                   Rng(derive_stream(base, kChannelMocapPitch)),
                   Rng(derive_stream(base, kChannelMocapRoll)),
                   Rng(derive_stream(base, kChannelBalance))};
}

double measure_baseline_reading_mg(const PlantBundle& plant, double window_s, Rng& rng) {
  const double load = plant.supported_mass_mg;
  const auto stream = virtualsensors::balance_stream(
      [load](double) { return load; }, window_s, plant.balance, rng);
  return virtualsensors::tail_mean(stream, window_s);
}

namespace {

// Settles one axis at the applied torque, runs it for the command duration
// and returns (windowed mocap mean, steady flag).
struct AxisMeasurement {
  double mean_angle_rad = 0.0;
  bool steady = true;
};

AxisMeasurement measure_axis(const gimbalsim::GimbalParams& gimbal,
                             const virtualsensors::MocapConfig& mocap, double tau_unm,
                             double duration_s, double window_s, double dt_s, Rng& rng) {
  // The protocol reads angles after the transients have died out; the run
  // therefore starts at the static equilibrium for the applied torque and
  // the integration confirms it stays there.
  gimbalsim::GimbalState initial;
  initial.theta_rad = gimbalsim::equilibrium_angle(gimbal, tau_unm);
  const auto traj = gimbalsim::simulate_run(
      gimbal, [tau_unm](double) { return tau_unm; }, duration_s, dt_s, initial);

  const auto stream = virtualsensors::mocap_stream(
      [&traj](double t) { return gimbalsim::trajectory_angle_at(traj, t); }, duration_s,
      mocap, rng);

  // Window statistics.
  const double cutoff = stream.t_s.back() - window_s + 1e-12;
  double sum = 0.0, sum_first = 0.0, sum_second = 0.0;
  std::size_t n = 0, n_first = 0, n_second = 0;
  std::size_t begin = 0;
  while (begin < stream.t_s.size() && stream.t_s[begin] < cutoff) ++begin;
  const std::size_t mid = begin + (stream.t_s.size() - begin) / 2;
  for (std::size_t i = begin; i < stream.t_s.size(); ++i) {
    sum += stream.value[i];
    ++n;
    if (i < mid) {
      sum_first += stream.value[i];
      ++n_first;
    } else {
      sum_second += stream.value[i];
      ++n_second;
    }
  }
  if (n == 0) throw ModelError("measure_axis: empty averaging window");

  AxisMeasurement out;
  out.mean_angle_rad = sum / static_cast<double>(n);

  // Drift check: difference of half-window means against 3x its noise SD.
  if (n_first > 0 && n_second > 0) {
    const double frame_sd = std::numbers::sqrt2 * mocap.marker_position_sd_mm /
                            mocap.marker_separation_mm;
    const double diff = sum_second / static_cast<double>(n_second) -
                        sum_first / static_cast<double>(n_first);
    const double diff_sd = frame_sd * std::sqrt(1.0 / static_cast<double>(n_first) +
                                                1.0 / static_cast<double>(n_second));
    out.steady = std::abs(diff) <= 3.0 * diff_sd;
  }
  return out;
}

}  // namespace

MeasuredPoint measure_point(const PlantBundle& plant, const signalgen::DriveCommand& cmd,
                            double flap_time_s, double baseline_reading_mg,
                            double average_window_s, double dt_s, PointRngs& rngs) {
  plant.validate();
  if (!(plant.calibrated_ks_unm_per_rad.pitch > 0.0) ||
      !(plant.calibrated_ks_unm_per_rad.roll > 0.0))
    throw ModelError("measure_point: no stiffness calibration available");
  if (!signalgen::rail_feasible(cmd).feasible)
    throw ModelError("measure_point: command is not rail-feasible");

  const firmodel::Wrench wrench =
      firmodel::stroke_avg_wrench(plant.fir, cmd, flap_time_s, rngs.fir);

  const AxisMeasurement pitch =
      measure_axis(plant.gimbal_pitch, plant.mocap, wrench.tau_pitch_unm,
                   cmd.duration_s, average_window_s, dt_s, rngs.mocap_pitch);
  const AxisMeasurement roll =
      measure_axis(plant.gimbal_roll, plant.mocap, wrench.tau_roll_unm,
                   cmd.duration_s, average_window_s, dt_s, rngs.mocap_roll);

  const double net_load = plant.supported_mass_mg - wrench.thrust_mgf;
  const auto balance = virtualsensors::balance_stream(
      [net_load](double) { return net_load; }, cmd.duration_s, plant.balance,
      rngs.balance);

  MeasuredPoint point;
  point.v_o_volts = cmd.offset_voltage_v;
  point.delta_a_volts = cmd.amplitude_difference_v;
  point.tau_pitch_unm = plant.calibrated_ks_unm_per_rad.pitch * pitch.mean_angle_rad;
  point.tau_roll_unm = plant.calibrated_ks_unm_per_rad.roll * roll.mean_angle_rad;
  point.thrust_mgf =
      baseline_reading_mg - virtualsensors::tail_mean(balance, average_window_s);
  point.steady = pitch.steady && roll.steady;
  return point;
}

SweepDataset run_grid(const PlantBundle& plant, const SweepSpec& spec,
                      std::uint64_t seed, bool parallel) {
  plant.validate();
  spec.validate();
  if (parallel && (plant.fir.wear_drift_rate_unm_per_s.pitch != 0.0 ||
                   plant.fir.wear_drift_rate_unm_per_s.roll != 0.0))
    throw ModelError("run_grid: parallel execution requires zero wear drift");

  const std::size_t n_pitch = spec.pitch_levels_v.size();
  const std::size_t n_roll = spec.roll_levels_v.size();
  const std::size_t n_points = n_pitch * n_roll;

  SweepDataset ds;
  ds.seed = seed;
  ds.spec = spec;
  ds.calibrated_ks_unm_per_rad = plant.calibrated_ks_unm_per_rad;
  ds.points.resize(n_points);

  // Exclusion pass: rail feasibility with the sweep margin. Flapping time at
  // each point is the settle time of all previously measured points, which
  // only depends on this deterministic flag vector.
  std::vector<double> flap_time(n_points, 0.0);
  double accumulated = 0.0;
  for (std::size_t pi = 0; pi < n_pitch; ++pi) {
    for (std::size_t ri = 0; ri < n_roll; ++ri) {
      const std::size_t idx = pi * n_roll + ri;
      auto& point = ds.points[idx];
      point.v_o_volts = spec.pitch_levels_v[pi];
      point.delta_a_volts = spec.roll_levels_v[ri];
      const auto cmd = command_for(spec, point.v_o_volts, point.delta_a_volts);
      point.excluded = !signalgen::rail_feasible(cmd, spec.rail_margin_v).feasible;
      flap_time[idx] = accumulated;
      if (!point.excluded) accumulated += spec.settle_duration_s;
    }
  }

  Rng baseline_rng(derive_stream(seed, rng_domain::kBaseline, 0));
  const double baseline_reading =
      measure_baseline_reading_mg(plant, spec.average_window_s, baseline_rng);

  const auto measure_index = [&](std::size_t idx) {
    auto& point = ds.points[idx];
    if (point.excluded) return;
    const auto cmd = command_for(spec, point.v_o_volts, point.delta_a_volts);
    PointRngs rngs = point_rngs(seed, rng_domain::kGrid, idx);
    const auto measured =
        measure_point(plant, cmd, flap_time[idx], baseline_reading,
                      spec.average_window_s, spec.integrator_dt_s, rngs);
    point.tau_pitch_unm = measured.tau_pitch_unm;
    point.tau_roll_unm = measured.tau_roll_unm;
    point.thrust_mgf = measured.thrust_mgf;
    point.steady = measured.steady;
  };

  if (!parallel) {
    for (std::size_t idx = 0; idx < n_points; ++idx) measure_index(idx);
    return ds;
  }

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t n_workers = std::min<std::size_t>(hw, n_points);
  std::vector<std::thread> workers;
  workers.reserve(n_workers);
  for (std::size_t w = 0; w < n_workers; ++w) {
    workers.emplace_back([&, w] {
      for (std::size_t idx = w; idx < n_points; idx += n_workers) measure_index(idx);
    });
  }
  for (auto& t : workers) t.join();
  return ds;
}

void TrimConfig::validate() const {
  if (!(step_v > 0.0)) throw std::invalid_argument("TrimConfig: step must be > 0");
  if (!(tolerance_unm > 0.0))
    throw std::invalid_argument("TrimConfig: tolerance must be > 0");
  if (observation_noise_sd_unm < 0.0)
    throw std::invalid_argument("TrimConfig: observation noise must be >= 0");
  if (observations_per_update < 1)
    throw std::invalid_argument("TrimConfig: need at least one observation per update");
  if (max_iterations < 1)
    throw std::invalid_argument("TrimConfig: need at least one iteration");
}

namespace {

double quantize(double value, double step) { return std::round(value / step) * step; }

}  // namespace

TrimResult trim_search(const firmodel::FirCharacter& fir,
                       const signalgen::DriveCommand& baseline_cmd,
                       const std::optional<firmodel::OffsetLoad>& load,
                       const TrimConfig& cfg, double flap_time_s, Rng& rng) {
  fir.validate();
  cfg.validate();

  AxisPair external{0.0, 0.0};
  if (load) external[load->axis] = firmodel::offset_torque_unm(*load);

  const auto command_at = [&baseline_cmd](double da, double vo) {
    signalgen::DriveCommand cmd = baseline_cmd;
    cmd.amplitude_difference_v = da;
    cmd.offset_voltage_v = vo;
    return cmd;
  };
  const auto feasible = [&](double da, double vo) {
    if (std::abs(da) > baseline_cmd.baseline_amplitude_v) return false;
    return signalgen::rail_feasible(command_at(da, vo)).feasible;
  };
  const auto observe = [&](double da, double vo, Axis axis) {
    const auto w = firmodel::mean_wrench(fir, command_at(da, vo), flap_time_s);
    const double truth =
        (axis == Axis::pitch ? w.tau_pitch_unm : w.tau_roll_unm) + external[axis];
    double sum = 0.0;
    for (int k = 0; k < cfg.observations_per_update; ++k)
      sum += rng.gaussian(truth, cfg.observation_noise_sd_unm);
    return sum / cfg.observations_per_update;
  };

  double da = quantize(cfg.start_delta_a_v, cfg.step_v);
  double vo = quantize(cfg.start_v_o_v, cfg.step_v);
  if (!feasible(da, vo))
    throw ModelError("trim_search: start point is not rail-feasible");

  TrimResult best;
  double best_score = std::numeric_limits<double>::infinity();

  for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
    const double obs_roll = observe(da, vo, Axis::roll);
    double step_roll = quantize(-obs_roll / fir.roll_slope_unm_per_v, cfg.step_v);
    while (step_roll != 0.0 && !feasible(da + step_roll, vo))
      step_roll -= std::copysign(cfg.step_v, step_roll);
    da += step_roll;

    const double obs_pitch = observe(da, vo, Axis::pitch);
    double step_pitch = quantize(-obs_pitch / fir.pitch_slope_unm_per_v, cfg.step_v);
    while (step_pitch != 0.0 && !feasible(da, vo + step_pitch))
      step_pitch -= std::copysign(cfg.step_v, step_pitch);
    vo += step_pitch;

    const double score = std::max(std::abs(obs_roll), std::abs(obs_pitch));
    if (score < best_score) {
      best_score = score;
      best.delta_a_v = da;
      best.v_o_v = vo;
      best.residual_unm = AxisPair{obs_pitch, obs_roll};
      best.iterations = iter;
    }

    if (step_roll == 0.0 && step_pitch == 0.0 &&
        std::abs(obs_roll) <= cfg.tolerance_unm &&
        std::abs(obs_pitch) <= cfg.tolerance_unm) {
      TrimResult result;
      result.delta_a_v = da;
      result.v_o_v = vo;
      result.iterations = iter;
      result.residual_unm = AxisPair{obs_pitch, obs_roll};
      result.converged = true;
      return result;
    }
  }

  best.converged = false;
  return best;
}

CalibrationOutcome run_calibration(const PlantBundle& plant,
                                   std::span<const firmodel::OffsetLoad> loads,
                                   double window_s, std::uint64_t seed) {
  plant.validate();
  if (!(window_s > 0.0))
    throw std::invalid_argument("run_calibration: window must be > 0");

  CalibrationOutcome outcome;
  outcome.points.reserve(loads.size());
  for (std::size_t i = 0; i < loads.size(); ++i) {
    const auto& load = loads[i];
    const double tau = firmodel::offset_torque_unm(
        load, plant.gimbal(load.axis).gravity_m_s2);
    const double theta_true =
        gimbalsim::equilibrium_angle(plant.gimbal(load.axis), tau);

    Rng rng(derive_stream(seed, rng_domain::kCalibration, i));
    const auto stream = virtualsensors::mocap_stream(
        [theta_true](double) { return theta_true; }, window_s, plant.mocap, rng);
    double sum = 0.0;
    for (double v : stream.value) sum += v;

    calibkit::CalibrationPoint point;
    point.applied_torque_unm = tau;
    point.measured_angle_rad = sum / static_cast<double>(stream.value.size());
    point.axis = load.axis;
    outcome.points.push_back(point);
  }

  std::vector<calibkit::CalibrationPoint> pitch_points, roll_points;
  for (const auto& p : outcome.points)
    (p.axis == Axis::pitch ? pitch_points : roll_points).push_back(p);
  outcome.fit_pitch = calibkit::calibrate_stiffness(pitch_points);
  outcome.fit_roll = calibkit::calibrate_stiffness(roll_points);
  return outcome;
}

void write_dataset_csv(const SweepDataset& ds, const std::filesystem::path& path) {
  csv::Writer writer(path);
  writer.header({"v_o_volts", "delta_a_volts", "tau_pitch_uNm", "tau_roll_uNm",
                 "thrust_mg", "excluded"});
  for (const auto& p : ds.points) {
    if (p.excluded) {
      writer.row({csv::format_double(p.v_o_volts), csv::format_double(p.delta_a_volts),
                  "", "", "", "1"});
    } else {
      writer.row({csv::format_double(p.v_o_volts), csv::format_double(p.delta_a_volts),
                  csv::format_double(p.tau_pitch_unm), csv::format_double(p.tau_roll_unm),
                  csv::format_double(p.thrust_mgf), "0"});
    }
  }
}

SweepDataset read_dataset_csv(const std::filesystem::path& path) {
  const auto table = csv::read(path);
  const int c_vo = table.column_index("v_o_volts");
  const int c_da = table.column_index("delta_a_volts");
  const int c_tp = table.column_index("tau_pitch_uNm");
  const int c_tr = table.column_index("tau_roll_uNm");
  const int c_th = table.column_index("thrust_mg");
  const int c_ex = table.column_index("excluded");
  if (c_vo < 0 || c_da < 0 || c_tp < 0 || c_tr < 0 || c_th < 0 || c_ex < 0)
    throw ModelError("read_dataset_csv: missing columns in " + path.string());

  SweepDataset ds;
  for (const auto& row : table.rows) {
    MeasuredPoint p;
    p.v_o_volts = std::stod(row.at(c_vo));
    p.delta_a_volts = std::stod(row.at(c_da));
    p.excluded = row.at(c_ex) == "1";
    if (!p.excluded) {
      p.tau_pitch_unm = std::stod(row.at(c_tp));
      p.tau_roll_unm = std::stod(row.at(c_tr));
      p.thrust_mgf = std::stod(row.at(c_th));
    }
    ds.points.push_back(p);
  }
  return ds;
}

}  // namespace fgt::mapper
