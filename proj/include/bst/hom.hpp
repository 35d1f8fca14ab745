#pragma once

#include <utility>

#include <Eigen/Core>

#include "bst/jsa.hpp"
#include "bst/units.hpp"

namespace bst {

/// Parameters of the analytic two-bin HOM coincidence model.
struct HomFitParams {
  double normalization = 1.0;  // N, baseline is N/2
  double visibility = 1.0;     // V in [0, 1]
  double bin_separation = 0.0; // delta, rad/ps
  double bin_sigma = 1.0;      // sigma, rad/ps; bin full width is 2*sigma
  double phase = 0.0;          // phi, rad

  void validate() const;
};

struct HomCurve {
  enum class Kind { Counts, Probability };
  Eigen::ArrayXd delays;  // ps, strictly increasing
  Eigen::ArrayXd values;
  Kind kind = Kind::Probability;

  void validate() const;
};

/// Coincidence probability of the analytic model at delay tau. Evaluated
/// in complex arithmetic; the imaginary residue must stay below
/// 1e-9 * N or NonRealResult is thrown.
double pcc_analytic(const HomFitParams& p, double tau);

/// Numeric two-photon interference from a square-grid normalized JSA:
/// p(tau) = (1 - Re int f(w1,w2) f*(w2,w1) e^{-i (w1-w2) tau}) / 2.
HomCurve hom_from_jsa(const JsaMatrix& jsa, const Eigen::ArrayXd& delays);

/// Poissonian k-sigma band around the model curve. Expected counts per
/// point scale the model so they sum to total_counts; the band is returned
/// in the model's own units.
std::pair<HomCurve, HomCurve> confidence_band(const HomFitParams& model,
                                              const Eigen::ArrayXd& delays,
                                              long long total_counts,
                                              double k_sigma);

/// Double-pass delay stage: tau = 2 * position / c.
inline double delay_from_stage_position(double position_mm) {
  return 2.0 * position_mm / (kSpeedOfLight * 1e-6);
}

}  // namespace bst
