#pragma once

#include <numbers>

namespace oamsim {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

}  // namespace oamsim
