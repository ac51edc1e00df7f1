#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "fgt/calibkit.hpp"
#include "fgt/firmodel.hpp"
#include "fgt/gimbalsim.hpp"
#include "fgt/rng.hpp"
#include "fgt/signalgen.hpp"
#include "fgt/types.hpp"
#include "fgt/virtualsensors.hpp"

namespace fgt::mapper {

/// Grid-sweep protocol: each point holds a constant command for
/// settle_duration and averages the sensor streams over the final
/// average_window. Points whose drive would leave the voltage rails (with
/// rail_margin headroom) are excluded up front.
struct SweepSpec {
  std::vector<double> pitch_levels_v{-15, -10, -5, 0, 5, 10, 15};
  std::vector<double> roll_levels_v{-25, -20, -15, -10, -5, 0, 5, 10, 15, 20, 25};
  double settle_duration_s = 3.0;
  double average_window_s = 0.5;
  double baseline_amplitude_v = 192.0;
  double bias_voltage_v = 250.0;
  double flap_frequency_hz = 180.0;
  double rail_margin_v = 2.0;
  double integrator_dt_s = 1e-3;

  void validate() const;
};

/// Everything the measurement loop needs: the true robot, the two gimbal
/// axes, the sensor models, and the stiffness calibration actually used to
/// convert angles to torques (never the ground-truth stiffness).
struct PlantBundle {
  firmodel::FirCharacter fir;
  gimbalsim::GimbalParams gimbal_pitch;
  gimbalsim::GimbalParams gimbal_roll;
  virtualsensors::MocapConfig mocap;
  virtualsensors::BalanceConfig balance;
  double supported_mass_mg = 12000.0;  // structure + robot resting on the balance
  AxisPair calibrated_ks_unm_per_rad{0.0, 0.0};

  void validate() const;
  const gimbalsim::GimbalParams& gimbal(Axis a) const {
    return a == Axis::pitch ? gimbal_pitch : gimbal_roll;
  }
};

struct MeasuredPoint {
  double v_o_volts = 0.0;
  double delta_a_volts = 0.0;
  double tau_pitch_unm = 0.0;
  double tau_roll_unm = 0.0;
  double thrust_mgf = 0.0;
  bool excluded = false;
  bool steady = true;
};

struct SweepDataset {
  std::vector<MeasuredPoint> points;
  std::uint64_t seed = 0;
  SweepSpec spec;
  AxisPair calibrated_ks_unm_per_rad{0.0, 0.0};
};

signalgen::DriveCommand command_for(const SweepSpec& spec, double v_o_volts,
                                    double delta_a_volts);

/// Independent noise channels of one measurement, derived from
/// (seed, domain, index) so grid points can be evaluated in any order.
struct PointRngs {
  Rng fir;
  Rng mocap_pitch;
  Rng mocap_roll;
  Rng balance;
};
PointRngs point_rngs(std::uint64_t seed, std::uint64_t domain, std::uint64_t index);

/// Session-start balance reading with the wings off (thrust = 0), averaged
/// over one window. Thrust measurements are this baseline minus the active
/// reading.
double measure_baseline_reading_mg(const PlantBundle& plant, double window_s, Rng& rng);

/// One protocol measurement: draw the stroke-averaged wrench, settle each
/// gimbal axis at it, run the sensors for the command duration, average the
/// final window, and convert angles with the calibrated stiffness.
MeasuredPoint measure_point(const PlantBundle& plant, const signalgen::DriveCommand& cmd,
                            double flap_time_s, double baseline_reading_mg,
                            double average_window_s, double dt_s, PointRngs& rngs);

/// Full grid sweep in deterministic pitch-major order. Wear drift advances
/// with cumulative flapping time. parallel may only be used with zero wear
/// drift; results are identical to the sequential order either way.
SweepDataset run_grid(const PlantBundle& plant, const SweepSpec& spec,
                      std::uint64_t seed, bool parallel = false);

/// Free-flight trim search configuration. The search adjusts commands in
/// quantized voltage steps against noisy torque-residual observations, the
/// virtual counterpart of manually re-trimming until vertical takeoff.
struct TrimConfig {
  double step_v = 0.5;
  double tolerance_unm = 0.15;
  double observation_noise_sd_unm = 0.05;
  int observations_per_update = 5;
  int max_iterations = 50;
  double start_delta_a_v = 0.0;
  double start_v_o_v = 0.0;

  void validate() const;
};

struct TrimResult {
  double delta_a_v = 0.0;
  double v_o_v = 0.0;
  int iterations = 0;
  AxisPair residual_unm{0.0, 0.0};
  bool converged = false;
};

/// Coordinate descent on (dA, V_o) nulling the observed roll and pitch
/// torque residuals, optionally with a known offset load attached. Returns
/// the best visited point with converged = false when max_iterations runs
/// out.
TrimResult trim_search(const firmodel::FirCharacter& fir,
                       const signalgen::DriveCommand& baseline_cmd,
                       const std::optional<firmodel::OffsetLoad>& load,
                       const TrimConfig& cfg, double flap_time_s, Rng& rng);

/// Virtual hung-mass calibration: applies each load's torque statically,
/// reads the deflection through the mocap model, and regresses torque on
/// angle per axis.
struct CalibrationOutcome {
  std::vector<calibkit::CalibrationPoint> points;
  calibkit::StiffnessFit fit_pitch;
  calibkit::StiffnessFit fit_roll;
};
CalibrationOutcome run_calibration(const PlantBundle& plant,
                                   std::span<const firmodel::OffsetLoad> loads,
                                   double window_s, std::uint64_t seed);

/// Dataset CSV with header
/// (v_o_volts, delta_a_volts, tau_pitch_uNm, tau_roll_uNm, thrust_mg, excluded).
/// Excluded rows carry empty measured cells.
void write_dataset_csv(const SweepDataset& ds, const std::filesystem::path& path);
SweepDataset read_dataset_csv(const std::filesystem::path& path);

}  // namespace fgt::mapper
