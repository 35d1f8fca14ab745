#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "bst/jsa.hpp"
#include "bst/peaks.hpp"

namespace bst {

/// Binary pi-phase profile over a JSI grid. The four lobes sit along the
/// energy-conservation line, so the sign structure is a function of the
/// frequency-difference coordinate: three boundaries (between the lobes of
/// each pulse-mode pair and between the two bins) with alternating band
/// signs. The mask is its own inverse.
struct PhaseMask {
  Eigen::MatrixXd signs;                           // entries +-1
  std::array<std::pair<double, double>, 4> lobe_centers;  // (l1, l2) nm
  std::array<double, 3> boundaries{};              // (w1-w2)/2 split points, rad/ps
};

/// Builds the mask from four detected lobe centers (any order). Throws
/// DegenerateCenters when the centers do not separate along the
/// difference coordinate.
PhaseMask build_phase_mask(const Eigen::ArrayXd& axis1_nm,
                           const Eigen::ArrayXd& axis2_nm,
                           const std::array<std::pair<double, double>, 4>& lobe_centers);

/// Convenience: detect the four strongest lobes of a JSI and build the mask.
PhaseMask build_phase_mask_auto(const Eigen::MatrixXd& jsi,
                                const Eigen::ArrayXd& axis1_nm,
                                const Eigen::ArrayXd& axis2_nm);

/// f = sqrt(jsi) .* mask, normalized on the frequency grids.
JsaMatrix jsa_from_jsi(const Eigen::MatrixXd& jsi, const FrequencyGrid& grid1,
                       const FrequencyGrid& grid2, const PhaseMask& mask);

/// Schmidt number of the masked square-root state on arbitrary wavelength
/// axes; each cell is weighted by its angular-frequency measure, so
/// wavelength-uniform (time-of-flight) grids are handled exactly.
double schmidt_number_masked(const Eigen::MatrixXd& jsi,
                             const Eigen::ArrayXd& axis1_nm,
                             const Eigen::ArrayXd& axis2_nm,
                             const PhaseMask& mask);

struct KEstimate {
  double mean = 0.0;
  double bound = 0.0;  // 3 sigma over the Monte Carlo rounds
  int rounds = 0;
  std::uint64_t seed = 0;
};

/// Poisson-resamples every bin of a measured count matrix, re-infers the
/// JSA through the mask and collects K statistics. Rounds run on derived
/// seeds, so the estimate is independent of the parallelism degree
/// (BST_THREADS caps the worker count).
KEstimate monte_carlo_schmidt(const Eigen::MatrixXd& counts,
                              const Eigen::ArrayXd& axis1_nm,
                              const Eigen::ArrayXd& axis2_nm,
                              const PhaseMask& mask, int rounds,
                              std::uint64_t seed);

struct CandidateReport {
  double phi = 0.0;
  double imag_norm_fraction = 0.0;
  double hom_phase_residual = 0.0;  // wrapped difference to the fitted phase
  bool selected = false;
};

struct PhaseReport {
  std::vector<CandidateReport> candidates;
  double fit_phi = 0.0;
  double fit_phi_err = 0.0;
  double detected_separation = 0.0;  // rad/ps from the JSI lobes

  int selected_count() const;
  bool ambiguous() const { return selected_count() != 1; }
  /// The unique selected candidate; throws Ambiguous otherwise.
  double selected_phi() const;
};

/// For each candidate phase, synthesizes the model state (bin separation
/// anchored to the JSI lobes), records the imaginary-norm fraction and the
/// phase recovered from its predicted HOM curve, and selects candidates
/// whose predicted phase lies within fit_phi +- fit_phi_err.
PhaseReport disambiguate_phase(const Eigen::MatrixXd& jsi,
                               const Eigen::ArrayXd& axis1_nm,
                               const Eigen::ArrayXd& axis2_nm,
                               const StateConfig& model,
                               const FrequencyGrid& model_grid,
                               const std::vector<double>& candidate_phis,
                               double fit_phi, double fit_phi_err);

}  // namespace bst
