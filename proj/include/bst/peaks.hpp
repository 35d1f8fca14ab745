#pragma once

#include <vector>

#include <Eigen/Core>

namespace bst {

struct Peak {
  int i = 0;
  int j = 0;
  double value = 0.0;
};

/// Interior 3x3-neighborhood maxima above threshold_frac of the global
/// peak. Plateau ties keep the first cell in row-major order.
std::vector<Peak> find_local_maxima(const Eigen::MatrixXd& m,
                                    double threshold_frac = 0.1);

struct Lobe {
  double lambda1 = 0.0;  // nm
  double lambda2 = 0.0;  // nm
  double value = 0.0;
  int i = 0;
  int j = 0;
};

/// Local maxima mapped to wavelength coordinates, with greedy non-maximum
/// suppression at the given Euclidean radius in nm; strongest first.
std::vector<Lobe> detect_lobes(const Eigen::MatrixXd& m,
                               const Eigen::ArrayXd& axis1_nm,
                               const Eigen::ArrayXd& axis2_nm,
                               double threshold_frac = 0.1,
                               double nms_radius_nm = 2.0);

}  // namespace bst
