#pragma once

#include <numbers>

// All simulation internals run in SI (N, m, kg, rad, s). Interface structs
// carry the bench units (uNm, mg, mm, V, deg); conversions live here and
// nowhere else.
namespace fgt::units {

inline constexpr double kStandardGravity = 9.80665;  // m/s^2

inline constexpr double unm_to_nm(double x) { return x * 1e-6; }
inline constexpr double nm_to_unm(double x) { return x * 1e6; }

inline constexpr double mg_to_kg(double x) { return x * 1e-9 * 1e3; }  // 1 mg = 1e-6 kg
inline constexpr double mm_to_m(double x) { return x * 1e-3; }

// mg*mm^2 -> kg*m^2
inline constexpr double mg_mm2_to_kg_m2(double x) { return x * 1e-12; }

inline constexpr double deg_to_rad(double x) { return x * std::numbers::pi / 180.0; }
inline constexpr double rad_to_deg(double x) { return x * 180.0 / std::numbers::pi; }

// Force exerted by a mass of x milligrams under gravity g, in newtons.
inline constexpr double mgf_to_n(double x, double g = kStandardGravity) {
  return mg_to_kg(x) * g;
}
inline constexpr double n_to_mgf(double x, double g = kStandardGravity) {
  return x / (1e-6 * g);
}

}  // namespace fgt::units
