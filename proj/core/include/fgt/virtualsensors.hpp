#pragma once

#include <filesystem>
#include <functional>
#include <vector>

#include "fgt/rng.hpp"
#include "fgt/types.hpp"

namespace fgt::virtualsensors {

struct MocapConfig {
  double frame_rate_hz = 240.0;
  double marker_separation_mm = 40.0;
  double marker_position_sd_mm = 0.05;

  void validate() const;
};

struct BalanceConfig {
  double report_rate_hz = 10.0;
  double reading_sd_mg = 2.0;
  double tare_mg = 0.0;

  void validate() const;
};

struct SensorStream {
  std::vector<double> t_s;
  std::vector<double> value;  // rad for mocap, mg for balance
};

/// Angle of the segment a -> b relative to its nominal orientation along +x.
/// Throws std::invalid_argument for coincident markers.
double angle_from_markers(const Vec2& a_mm, const Vec2& b_mm);

/// Worst-case single-frame angle quantum of the marker pair: both markers
/// displaced by one position-noise sigma in opposite transverse directions.
double angular_resolution_rad(const MocapConfig& cfg);

/// Samples the true angle at frame_rate over [0, window). Each frame places
/// the two markers rigidly at the true angle, perturbs each transversely
/// with independent Gaussian position noise, and recovers the angle from the
/// perturbed pair. Zero noise reproduces the truth bit-exactly.
SensorStream mocap_stream(const std::function<double(double)>& theta_rad_of_t,
                          double window_s, const MocapConfig& cfg, Rng& rng);

/// Balance samples at report_rate: reading = tare + net_load(t) + noise,
/// where net_load is the supported weight minus thrust, in mg units.
SensorStream balance_stream(const std::function<double(double)>& net_load_mg_of_t,
                            double window_s, const BalanceConfig& cfg, Rng& rng);

/// Mean of the samples with t >= (end of stream) - tail_s.
double tail_mean(const SensorStream& stream, double tail_s);

/// Serial-feed style log, one "t_seconds,reading_mg" line per reading.
void write_balance_log(const SensorStream& stream, const std::filesystem::path& path);

}  // namespace fgt::virtualsensors
