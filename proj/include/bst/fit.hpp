#pragma once

#include <Eigen/Core>

#include "bst/hom.hpp"

namespace bst {

/// Per-parameter fit intervals in the order N, V, delta, sigma, phi.
struct FitBounds {
  struct Interval {
    double lo = 0.0;
    double hi = 0.0;
  };
  Interval normalization{1e-6, 1e12};
  Interval visibility{0.0, 1.0};
  Interval bin_separation{1e-3, 1e3};
  Interval bin_sigma{1e-3, 1e3};
  Interval phase{-1e6, 1e6};
};

struct FitResult {
  HomFitParams params;           // phase wrapped to [0, 2*pi)
  Eigen::Matrix<double, 5, 1> standard_errors;
  Eigen::Matrix<double, 5, 5> covariance;  // physical coordinates
  double residual_sum = 0.0;     // sum of squared residuals
  bool converged = false;
  int iterations = 0;
};

/// Damped least squares (Levenberg-style Gauss-Newton) of pcc_analytic
/// against the data from the given start. Internally N, delta, sigma run
/// in log coordinates and V through a bounded logistic; phi is free and
/// wrapped only for reporting. Deterministic. `converged=false` after 500
/// iterations without meeting the step/cost tolerances.
FitResult fit_interferogram(const HomCurve& data, const HomFitParams& init,
                            const FitBounds& bounds = FitBounds{});

/// Data-driven start: baseline from the outer 20% of delays, bin
/// separation from the dominant discrete spectral peak of the
/// mean-subtracted data, sigma from the envelope second moment, phi = 0.
HomFitParams default_init(const HomCurve& data);

/// Candidate bin separations: the strongest spectral peaks of the
/// mean-subtracted data (helper for multi-start fitting).
std::vector<double> spectral_peak_candidates(const HomCurve& data,
                                             int max_candidates = 2);

/// Multi-start fit over spectral-peak separations, a phase grid and two
/// envelope widths; returns the lowest-cost result.
FitResult fit_interferogram_auto(const HomCurve& data,
                                 const FitBounds& bounds = FitBounds{});

}  // namespace bst
