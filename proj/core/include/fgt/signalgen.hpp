#pragma once

#include <filesystem>
#include <vector>

namespace fgt::signalgen {

/// Two-wing sinusoidal drive command. The command tuple encodes thrust via
/// the shared amplitude A, roll via the amplitude difference dA, and pitch
/// via the offset voltage V_o added to one wing and subtracted from the
/// other.
struct DriveCommand {
  double bias_voltage_v = 250.0;        // V_b, supply rail for both wings
  double baseline_amplitude_v = 0.0;    // A, per-wing baseline peak-to-peak
  double amplitude_difference_v = 0.0;  // dA
  double offset_voltage_v = 0.0;        // V_o
  double flap_frequency_hz = 180.0;     // f
  double duration_s = 3.0;

  /// Throws std::invalid_argument unless f > 0, duration > 0, V_b > 0 and
  /// A >= |dA| (each wing amplitude (A +- dA)/2 must be non-negative).
  void validate() const;
};

struct WingVoltages {
  double v1 = 0.0;
  double v2 = 0.0;
};

/// Instantaneous drive voltages:
///   v1 = V_b/2 - V_o + (A + dA)/2 * sin(2 pi f t)
///   v2 = V_b/2 + V_o - (A - dA)/2 * sin(2 pi f t)
WingVoltages drive_voltages(const DriveCommand& cmd, double t_s);

struct RailCheck {
  bool feasible = false;
  /// Voltage over the whole cycle that comes closest to (or farthest past)
  /// either rail, over both wings.
  double extreme_voltage_v = 0.0;
};

/// Closed-form feasibility: both wing voltages must stay within
/// [margin, V_b - margin] for all t.
RailCheck rail_feasible(const DriveCommand& cmd, double margin_v = 0.0);

struct WaveformSeries {
  double sample_rate_hz = 0.0;
  std::vector<double> samples_v1;
  std::vector<double> samples_v2;
};

/// Uniform sampling of drive_voltages over [0, duration). Length is
/// round(sample_rate * duration). Rejects sample_rate < 2 f.
WaveformSeries sample_waveform(const DriveCommand& cmd, double sample_rate_hz);

/// CSV dump with header (t_seconds, v1_volts, v2_volts).
void write_waveform_csv(const WaveformSeries& series, const std::filesystem::path& path);

}  // namespace fgt::signalgen
