#include "fgt/signalgen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "fgt/csv.hpp"

namespace fgt::signalgen {

void DriveCommand::validate() const {
  if (!(flap_frequency_hz > 0.0))
    throw std::invalid_argument("DriveCommand: flap frequency must be > 0");
  if (!(duration_s > 0.0))
    throw std::invalid_argument("DriveCommand: duration must be > 0");
  if (!(bias_voltage_v > 0.0))
    throw std::invalid_argument("DriveCommand: bias voltage must be > 0");
  if (baseline_amplitude_v < std::abs(amplitude_difference_v))
    throw std::invalid_argument(
        "DriveCommand: baseline amplitude must be >= |amplitude difference|");
}

WingVoltages drive_voltages(const DriveCommand& cmd, double t_s) {
  const double s = std::sin(2.0 * std::numbers::pi * cmd.flap_frequency_hz * t_s);
  const double half_bias = 0.5 * cmd.bias_voltage_v;
  WingVoltages v;
  v.v1 = half_bias - cmd.offset_voltage_v +
         0.5 * (cmd.baseline_amplitude_v + cmd.amplitude_difference_v) * s;
  v.v2 = half_bias + cmd.offset_voltage_v -
         0.5 * (cmd.baseline_amplitude_v - cmd.amplitude_difference_v) * s;
  return v;
}

RailCheck rail_feasible(const DriveCommand& cmd, double margin_v) {
  cmd.validate();
  const double half_bias = 0.5 * cmd.bias_voltage_v;
  const double amp1 = 0.5 * (cmd.baseline_amplitude_v + cmd.amplitude_difference_v);
  const double amp2 = 0.5 * (cmd.baseline_amplitude_v - cmd.amplitude_difference_v);

  const double candidates[4] = {
      half_bias - cmd.offset_voltage_v + amp1,  // v1 max
      half_bias - cmd.offset_voltage_v - amp1,  // v1 min
      half_bias + cmd.offset_voltage_v + amp2,  // v2 max
      half_bias + cmd.offset_voltage_v - amp2,  // v2 min
  };

  RailCheck check;
  double worst_headroom = std::numeric_limits<double>::infinity();
  check.feasible = true;
  for (double v : candidates) {
    const double headroom = std::min(v, cmd.bias_voltage_v - v);
    if (headroom < worst_headroom) {
      worst_headroom = headroom;
      check.extreme_voltage_v = v;
    }
    if (v < margin_v || v > cmd.bias_voltage_v - margin_v) check.feasible = false;
  }
  return check;
}

WaveformSeries sample_waveform(const DriveCommand& cmd, double sample_rate_hz) {
  cmd.validate();
  if (sample_rate_hz < 2.0 * cmd.flap_frequency_hz)
    throw std::invalid_argument("sample_waveform: sample rate below 2f aliases the drive");

  const auto n = static_cast<std::size_t>(std::llround(sample_rate_hz * cmd.duration_s));
  WaveformSeries series;
  series.sample_rate_hz = sample_rate_hz;
  series.samples_v1.reserve(n);
  series.samples_v2.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto [v1, v2] = drive_voltages(cmd, static_cast<double>(i) / sample_rate_hz);
    series.samples_v1.push_back(v1);
    series.samples_v2.push_back(v2);
  }
  return series;
}

void write_waveform_csv(const WaveformSeries& series, const std::filesystem::path& path) {
  csv::Writer writer(path);
  writer.header({"t_seconds", "v1_volts", "v2_volts"});
  for (std::size_t i = 0; i < series.samples_v1.size(); ++i) {
    writer.row_numeric({static_cast<double>(i) / series.sample_rate_hz,
                        series.samples_v1[i], series.samples_v2[i]});
  }
}

}  // namespace fgt::signalgen
