#pragma once

#include <string>

namespace fgt {

enum class Axis { pitch, roll };

inline const char* axis_name(Axis a) { return a == Axis::pitch ? "pitch" : "roll"; }

/// Per-axis scalar pair used for noise levels, drift rates, stiffness, ...
struct AxisPair {
  double pitch = 0.0;
  double roll = 0.0;

  double& operator[](Axis a) { return a == Axis::pitch ? pitch : roll; }
  double operator[](Axis a) const { return a == Axis::pitch ? pitch : roll; }
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

}  // namespace fgt
