#pragma once

#include <complex>

#include <Eigen/Core>

#include "bst/grid.hpp"
#include "bst/pmf.hpp"
#include "bst/pump.hpp"

namespace bst {

/// Joint spectral amplitude f(omega_1, omega_2) sampled on two frequency
/// grids; rows index photon "1", columns photon "2". When `normalized`,
/// sum |f|^2 * step1 * step2 == 1.
struct JsaMatrix {
  FrequencyGrid grid1;
  FrequencyGrid grid2;
  Eigen::MatrixXcd amplitudes;
  bool normalized = false;

  double measure() const { return grid1.step * grid2.step; }

  double squared_norm() const {
    return amplitudes.squaredNorm() * measure();
  }
};

/// Source settings for the hyper-entangled state: a pulse-mode pair from
/// the order-1 PMF, displaced into two frequency bins and mapped into the
/// bin superposition with phase phi_p.
struct StateConfig {
  double bin_separation = 11.0;  // nm between bin centers
  double bin_width = 3.0;        // nm, marginal intensity full width
  double phase_phi_p = 0.0;      // rad
  PumpSpec pump;
  PmfSpec pmf;
  // When false the PMF width is derived from bin_width at the degenerate
  // wavelength; an explicit pmf.width in a config sets it directly.
  bool pmf_width_explicit = false;

  double degenerate_wavelength() const { return 2.0 * pump.center_wavelength; }

  PmfSpec resolved_pmf() const {
    PmfSpec p = pmf;
    if (!pmf_width_explicit) {
      p.width = hg_width_for_bin(bin_width, degenerate_wavelength());
    }
    return p;
  }

  void validate() const;
};

/// f = phi((w1-w2)/2) * alpha(w1+w2), normalized. Throws GridMismatch when
/// the grids miss the state's support entirely.
JsaMatrix compose_jsa(const FrequencyGrid& grid1, const FrequencyGrid& grid2,
                      const PumpSpec& pump, const PmfSpec& pmf);

/// Re-evaluates the model with photon 1 centered at lambda0 - shift/2 and
/// photon 2 at lambda0 + shift/2 (lambda0 = degenerate wavelength of the
/// pump); the energy-sum envelope is untouched. Throws ShiftOutOfGrid when
/// less than 99% of the displaced intensity falls inside the grids.
JsaMatrix displace_antidiagonal(const FrequencyGrid& grid1,
                                const FrequencyGrid& grid2,
                                const PumpSpec& pump, const PmfSpec& pmf,
                                double shift_nm);

/// Polarization-to-frequency bin mapping: (f - e^{i phi_p} f^T) / N on a
/// shared square grid.
JsaMatrix apply_bin_map(const JsaMatrix& jsa, double phase_phi_p);

/// Elementwise |f|^2.
Eigen::MatrixXd jsi_of(const JsaMatrix& jsa);

/// Full pipeline for a StateConfig: compose, displace by bin_separation,
/// apply the bin map.
JsaMatrix simulate_state(const StateConfig& config, const FrequencyGrid& grid);

/// Ideal four-lobe state with Gaussian frequency bins: exact tensor
/// product of two rank-2 entangled structures (pump width matched to the
/// HG1 profile). `delta` is the angular bin separation and `sigma` the
/// angular bin half-width of the analytic HOM model.
JsaMatrix ideal_four_lobe_state(const FrequencyGrid& grid, double delta,
                                double sigma, double phi);

/// Fraction of the analytic state intensity captured by the grids.
double grid_intensity_fraction(const JsaMatrix& unnormalized,
                               const PumpSpec& pump, const PmfSpec& pmf);

}  // namespace bst
