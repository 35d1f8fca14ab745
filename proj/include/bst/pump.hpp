#pragma once

#include <cmath>
#include <numbers>

#include <Eigen/Core>

#include "bst/errors.hpp"
#include "bst/units.hpp"

namespace bst {

enum class PumpShape { SechSquared, Gaussian };

/// Mode-locked pump laser. The spectral envelope is transform-limited and
/// anchored to the temporal intensity FWHM through the shape's
/// time-bandwidth product.
struct PumpSpec {
  double center_wavelength = 775.0;   // nm
  double pulse_duration_fwhm = 1.27;  // ps, temporal intensity FWHM
  double repetition_period = 12.5;    // ns
  PumpShape shape = PumpShape::SechSquared;

  double center_omega() const { return angular_frequency(center_wavelength); }

  /// Spectral width parameter, rad/ps. For SechSquared this is B in
  /// alpha = sech(Omega/B); for Gaussian it is s in exp(-Omega^2/(2 s^2)).
  double spectral_width() const {
    if (shape == PumpShape::SechSquared) {
      // Intensity FWHM of sech^2(Omega/B) is 2*acosh(sqrt(2))*B; equate to
      // 2*pi*TBP/tau.
      return std::numbers::pi * kTbpSech2 /
             (std::acosh(std::sqrt(2.0)) * pulse_duration_fwhm);
    }
    return 2.0 * std::sqrt(std::numbers::ln2) / pulse_duration_fwhm;
  }

  void validate() const {
    if (!(center_wavelength > 0.0))
      throw InvalidSpec("pump.center_wavelength: must be > 0");
    if (!(pulse_duration_fwhm > 0.0))
      throw InvalidSpec("pump.pulse_duration_fwhm: must be > 0");
    if (!(repetition_period > 0.0))
      throw InvalidSpec("pump.repetition_period: must be > 0");
  }
};

/// Pulse duration that gives a Gaussian pump the requested spectral width.
inline double gaussian_duration_for_width(double spectral_width) {
  return 2.0 * std::sqrt(std::numbers::ln2) / spectral_width;
}

/// Spectral amplitude at detuning Omega from the pump center; unit peak,
/// even in Omega.
template <typename Scalar>
Scalar pump_envelope_at(const PumpSpec& pump, Scalar detuning) {
  const Scalar b = static_cast<Scalar>(pump.spectral_width());
  if (pump.shape == PumpShape::SechSquared) {
    using std::cosh;
    return Scalar(1) / cosh(detuning / b);
  }
  using std::exp;
  return exp(-detuning * detuning / (Scalar(2) * b * b));
}

/// Evaluates the PEF at omega_sum = omega_1 + omega_2.
inline double pump_envelope(const PumpSpec& pump, double omega_sum) {
  return pump_envelope_at(pump, omega_sum - pump.center_omega());
}

template <typename Derived>
Eigen::ArrayXd pump_envelope(const PumpSpec& pump,
                             const Eigen::ArrayBase<Derived>& omega_sum) {
  const double w3 = pump.center_omega();
  const double b = pump.spectral_width();
  if (pump.shape == PumpShape::SechSquared) {
    return ((omega_sum - w3) / b).cosh().inverse();
  }
  return (-(omega_sum - w3).square() / (2.0 * b * b)).exp();
}

/// Integral of |alpha|^2 over the detuning axis (closed form), used for
/// support-coverage checks.
inline double pump_intensity_integral(const PumpSpec& pump) {
  const double b = pump.spectral_width();
  if (pump.shape == PumpShape::SechSquared) return 2.0 * b;
  return std::sqrt(std::numbers::pi) * b;
}

}  // namespace bst
