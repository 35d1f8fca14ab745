#pragma once

#include <Eigen/Core>

#include "bst/units.hpp"

namespace bst {

/// Uniform 1-D grid of angular frequencies covering a wavelength window
/// [center - span/2, center + span/2]. The axis is strictly increasing in
/// omega (so decreasing in wavelength) and endpoint-exact: axis(0) maps to
/// the long-wavelength edge, axis(n-1) to the short-wavelength edge.
struct FrequencyGrid {
  double center_wavelength = 0.0;  // nm
  double span = 0.0;               // nm
  int n_points = 0;
  Eigen::ArrayXd axis;             // rad/ps
  double step = 0.0;               // rad/ps

  /// Wavelength of each axis sample, nm.
  Eigen::ArrayXd wavelength_axis() const {
    return 2.0 * std::numbers::pi * kSpeedOfLight / axis;
  }

  double min_wavelength() const { return center_wavelength - span / 2.0; }
  double max_wavelength() const { return center_wavelength + span / 2.0; }

  bool same_axis(const FrequencyGrid& other) const {
    return n_points == other.n_points &&
           center_wavelength == other.center_wavelength && span == other.span;
  }
};

FrequencyGrid make_grid(double center_wavelength_nm, double span_nm,
                        int n_points);

}  // namespace bst
