#include "bst/grid.hpp"

#include "bst/errors.hpp"

namespace bst {

FrequencyGrid make_grid(double center_wavelength_nm, double span_nm,
                        int n_points) {
  if (span_nm <= 0.0) {
    throw NonPositiveSpan("grid span must be > 0 nm");
  }
  if (center_wavelength_nm <= span_nm / 2.0) {
    throw NonPositiveSpan(
        "grid center wavelength must exceed span/2 (window would reach a "
        "nonpositive wavelength)");
  }
  if (n_points < 2) {
    throw TooFewPoints("grid needs at least 2 points");
  }
  FrequencyGrid g;
  g.center_wavelength = center_wavelength_nm;
  g.span = span_nm;
  g.n_points = n_points;
  const double omega_lo = angular_frequency(center_wavelength_nm + span_nm / 2.0);
  const double omega_hi = angular_frequency(center_wavelength_nm - span_nm / 2.0);
  g.axis = Eigen::ArrayXd::LinSpaced(n_points, omega_lo, omega_hi);
  g.step = (omega_hi - omega_lo) / static_cast<double>(n_points - 1);
  return g;
}

}  // namespace bst
