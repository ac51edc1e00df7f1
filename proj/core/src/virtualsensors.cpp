#include "fgt/virtualsensors.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "fgt/csv.hpp"
#include "fgt/error.hpp"

namespace fgt::virtualsensors {

void MocapConfig::validate() const {
  if (!(frame_rate_hz > 0.0))
    throw std::invalid_argument("MocapConfig: frame rate must be > 0");
  if (!(marker_separation_mm > 0.0))
    throw std::invalid_argument("MocapConfig: marker separation must be > 0");
  if (marker_position_sd_mm < 0.0)
    throw std::invalid_argument("MocapConfig: marker position sd must be >= 0");
}

void BalanceConfig::validate() const {
  if (!(report_rate_hz > 0.0))
    throw std::invalid_argument("BalanceConfig: report rate must be > 0");
  if (reading_sd_mg < 0.0)
    throw std::invalid_argument("BalanceConfig: reading sd must be >= 0");
}

double angle_from_markers(const Vec2& a_mm, const Vec2& b_mm) {
  const double dx = b_mm.x - a_mm.x;
  const double dy = b_mm.y - a_mm.y;
  if (dx == 0.0 && dy == 0.0)
    throw std::invalid_argument("angle_from_markers: coincident markers");
  return std::atan2(dy, dx);
}

double angular_resolution_rad(const MocapConfig& cfg) {
  cfg.validate();
  const double half = 0.5 * cfg.marker_separation_mm;
  const Vec2 a{-half, -cfg.marker_position_sd_mm};
  const Vec2 b{half, cfg.marker_position_sd_mm};
  return angle_from_markers(a, b);
}

namespace {

std::size_t stream_length(double rate_hz, double window_s) {
  return static_cast<std::size_t>(std::llround(rate_hz * window_s));
}

}  // namespace

SensorStream mocap_stream(const std::function<double(double)>& theta_rad_of_t,
                          double window_s, const MocapConfig& cfg, Rng& rng) {
  cfg.validate();
  const std::size_t n = stream_length(cfg.frame_rate_hz, window_s);
  const double half = 0.5 * cfg.marker_separation_mm;
  const double sd = cfg.marker_position_sd_mm;

  SensorStream stream;
  stream.t_s.reserve(n);
  stream.value.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / cfg.frame_rate_hz;
    const double theta = theta_rad_of_t(t);
    stream.t_s.push_back(t);
    if (sd == 0.0) {
      stream.value.push_back(theta);  // exact fast path
      continue;
    }
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    // Rigid marker positions, then independent transverse perturbations.
    const double na = rng.gaussian(0.0, sd);
    const double nb = rng.gaussian(0.0, sd);
    const Vec2 a{-half * c - na * s, -half * s + na * c};
    const Vec2 b{half * c - nb * s, half * s + nb * c};
    stream.value.push_back(angle_from_markers(a, b));
  }
  return stream;
}

SensorStream balance_stream(const std::function<double(double)>& net_load_mg_of_t,
                            double window_s, const BalanceConfig& cfg, Rng& rng) {
  cfg.validate();
  const std::size_t n = stream_length(cfg.report_rate_hz, window_s);
  SensorStream stream;
  stream.t_s.reserve(n);
  stream.value.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / cfg.report_rate_hz;
    stream.t_s.push_back(t);
    stream.value.push_back(cfg.tare_mg + net_load_mg_of_t(t) +
                           rng.gaussian(0.0, cfg.reading_sd_mg));
  }
  return stream;
}

double tail_mean(const SensorStream& stream, double tail_s) {
  if (stream.t_s.empty()) throw std::invalid_argument("tail_mean: empty stream");
  const double cutoff = stream.t_s.back() - tail_s + 1e-12;
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < stream.t_s.size(); ++i) {
    if (stream.t_s[i] >= cutoff) {
      sum += stream.value[i];
      ++count;
    }
  }
  if (count == 0) throw std::invalid_argument("tail_mean: window contains no samples");
  return sum / static_cast<double>(count);
}

void write_balance_log(const SensorStream& stream, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ModelError("cannot open for writing: " + path.string());
  for (std::size_t i = 0; i < stream.t_s.size(); ++i)
    out << csv::format_double(stream.t_s[i]) << ','
        << csv::format_double(stream.value[i]) << '\n';
}

}  // namespace fgt::virtualsensors
