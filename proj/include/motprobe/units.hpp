#pragma once

#include <cmath>
#include <numbers>

// Internal units are seconds, micrometers, atoms/um^3 and photons/s.
// Configuration files use laboratory units; conversion happens only at the
// config boundary.
namespace motprobe::units {

inline constexpr double pi = std::numbers::pi;

inline constexpr double planck_J_s = 6.62607015e-34;
inline constexpr double speed_of_light_m_s = 299792458.0;

inline constexpr double um_per_mm = 1.0e3;
inline constexpr double m_per_um = 1.0e-6;
inline constexpr double hz_per_mhz = 1.0e6;

constexpr double mm_to_um(double mm) { return mm * um_per_mm; }
constexpr double um_to_mm(double um) { return um / um_per_mm; }

// atoms/mm^3 -> atoms/um^3
constexpr double per_mm3_to_per_um3(double n) { return n * 1.0e-9; }
constexpr double per_um3_to_per_mm3(double n) { return n * 1.0e9; }

}  // namespace motprobe::units
