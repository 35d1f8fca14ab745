#pragma once

#include <cmath>
#include <numbers>

#include <Eigen/Core>

#include "bst/errors.hpp"
#include "bst/units.hpp"

namespace bst {

/// Width parameter w of the Hermite-Gauss phase-matching profile whose
/// frequency-bin marginal has an intensity full width matching
/// bin_width_nm at the given degenerate wavelength. The bin full width in
/// angular units equals 4w (the bin half-width sigma of the analytic HOM
/// model is 2w).
inline double hg_width_for_bin(double bin_width_nm, double center_nm) {
  const double full = angular_frequency(center_nm - bin_width_nm / 2.0) -
                      angular_frequency(center_nm + bin_width_nm / 2.0);
  return full / 4.0;
}

/// Crystal phase-matching function, engineered as a Hermite-Gauss profile
/// of order 0 (plain Gaussian) or 1 along the frequency-difference
/// coordinate.
struct PmfSpec {
  int order = 1;
  double width = hg_width_for_bin(3.0, 1550.0);  // w, rad/ps
  double mismatch_offset = 0.0;                  // rad/ps

  void validate() const {
    if (order != 0 && order != 1)
      throw UnsupportedOrder("pmf.order: must be 0 or 1");
    if (!(width > 0.0)) throw InvalidSpec("pmf.width: must be > 0");
  }
};

/// HG profile at x = omega_diff - mismatch_offset:
///   order 0:  exp(-x^2 / (2 w^2))
///   order 1:  (sqrt(2) x / w) exp(-x^2 / (2 w^2)), odd, extrema at +-w.
template <typename Scalar>
Scalar pmf_hermite_gauss_at(const PmfSpec& pmf, Scalar x) {
  using std::exp;
  const Scalar w = static_cast<Scalar>(pmf.width);
  const Scalar g = exp(-x * x / (Scalar(2) * w * w));
  if (pmf.order == 0) return g;
  if (pmf.order == 1) return Scalar(std::numbers::sqrt2) * x / w * g;
  throw UnsupportedOrder("pmf order must be 0 or 1");
}

inline double pmf_hermite_gauss(const PmfSpec& pmf, double omega_diff) {
  return pmf_hermite_gauss_at(pmf, omega_diff - pmf.mismatch_offset);
}

/// Integral of |phi|^2 over the difference axis; equals sqrt(pi)*w for
/// both supported orders.
inline double pmf_intensity_integral(const PmfSpec& pmf) {
  if (pmf.order != 0 && pmf.order != 1)
    throw UnsupportedOrder("pmf order must be 0 or 1");
  return std::sqrt(std::numbers::pi) * pmf.width;
}

}  // namespace bst
