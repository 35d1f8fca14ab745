#pragma once

#include <cmath>
#include <numbers>

// Unit conventions used throughout the toolkit:
//   wavelengths            nm
//   times / delays         ps
//   angular frequencies    rad/ps
//   ordinary frequencies   THz  (rad/ps divided by 2*pi)
namespace bst {

inline constexpr double kSpeedOfLight = 299792.458;  // nm/ps

/// omega = 2*pi*c/lambda, rad/ps for lambda in nm.
inline double angular_frequency(double wavelength_nm) {
  return 2.0 * std::numbers::pi * kSpeedOfLight / wavelength_nm;
}

inline double wavelength_from_angular(double omega) {
  return 2.0 * std::numbers::pi * kSpeedOfLight / omega;
}

inline double thz_from_angular(double omega) {
  return omega / (2.0 * std::numbers::pi);
}

inline double angular_from_thz(double nu_thz) {
  return 2.0 * std::numbers::pi * nu_thz;
}

// Time-bandwidth products (intensity FWHM times intensity spectral FWHM)
// for transform-limited pulses.
inline constexpr double kTbpSech2 = 0.315;
inline const double kTbpGaussian = 2.0 * std::numbers::ln2 / std::numbers::pi;

/// Wraps an angle into [0, 2*pi).
inline double wrap_two_pi(double phi) {
  const double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(phi, two_pi);
  return r < 0.0 ? r + two_pi : r;
}

/// Wraps an angle difference into (-pi, pi].
inline double wrap_pi(double phi) {
  double r = wrap_two_pi(phi);
  return r > std::numbers::pi ? r - 2.0 * std::numbers::pi : r;
}

}  // namespace bst
