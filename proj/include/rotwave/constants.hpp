#pragma once

#include <numbers>

namespace rotwave {

/// Reduced Planck constant in eV*fs. All times are femtoseconds, all energies eV.
inline constexpr double kHbar = 0.6582119569;

inline constexpr double kPi = std::numbers::pi;

inline constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

inline constexpr const char* kVersion = "1.0.0";

}  // namespace rotwave
