#include "bst/jsa.hpp"

#include <cmath>

#include "bst/errors.hpp"

namespace bst {

namespace {

JsaMatrix evaluate_model(const FrequencyGrid& grid1, const FrequencyGrid& grid2,
                         const PumpSpec& pump, const PmfSpec& pmf) {
  pump.validate();
  pmf.validate();
  const double w3 = pump.center_omega();
  JsaMatrix out;
  out.grid1 = grid1;
  out.grid2 = grid2;
  out.amplitudes.resize(grid1.n_points, grid2.n_points);
  for (int j = 0; j < grid2.n_points; ++j) {
    const double w2 = grid2.axis(j);
    for (int i = 0; i < grid1.n_points; ++i) {
      const double w1 = grid1.axis(i);
      const double pef = pump_envelope_at(pump, w1 + w2 - w3);
      const double phi = pmf_hermite_gauss(pmf, (w1 - w2) / 2.0);
      out.amplitudes(i, j) = phi * pef;
    }
  }
  return out;
}

void normalize(JsaMatrix& jsa) {
  const double sq = jsa.squared_norm();
  if (!(sq > 0.0) || !std::isfinite(sq)) {
    throw ZeroNorm("state has zero or non-finite norm; cannot normalize");
  }
  jsa.amplitudes /= std::sqrt(sq);
  jsa.normalized = true;
}

}  // namespace

void StateConfig::validate() const {
  pump.validate();
  resolved_pmf().validate();
  if (!(bin_width > 0.0))
    throw InvalidSpec("state.bin_width: must be > 0");
  if (!(bin_separation > bin_width))
    throw InvalidSpec(
        "state.bin_separation: must exceed bin_width (bins would overlap)");
}

JsaMatrix compose_jsa(const FrequencyGrid& grid1, const FrequencyGrid& grid2,
                      const PumpSpec& pump, const PmfSpec& pmf) {
  JsaMatrix jsa = evaluate_model(grid1, grid2, pump, pmf);
  if (jsa.amplitudes.cwiseAbs().maxCoeff() < 1e-300) {
    throw GridMismatch("grids do not overlap the downconversion band");
  }
  normalize(jsa);
  return jsa;
}

double grid_intensity_fraction(const JsaMatrix& unnormalized,
                               const PumpSpec& pump, const PmfSpec& pmf) {
  // d(omega1) d(omega2) = d(omega_sum) d(omega_diff/2); the analytic total
  // factorizes over the two rotated axes.
  const double total = pmf_intensity_integral(pmf) * pump_intensity_integral(pump);
  return unnormalized.squared_norm() / total;
}

JsaMatrix displace_antidiagonal(const FrequencyGrid& grid1,
                                const FrequencyGrid& grid2,
                                const PumpSpec& pump, const PmfSpec& pmf,
                                double shift_nm) {
  if (shift_nm < 0.0) throw InvalidSpec("displacement shift must be >= 0");
  const double lambda0 = 2.0 * pump.center_wavelength;
  const double w_c1 = angular_frequency(lambda0 - shift_nm / 2.0);
  const double w_c2 = angular_frequency(lambda0 + shift_nm / 2.0);
  PmfSpec shifted = pmf;
  shifted.mismatch_offset += (w_c1 - w_c2) / 2.0;
  JsaMatrix jsa = evaluate_model(grid1, grid2, pump, shifted);
  if (grid_intensity_fraction(jsa, pump, shifted) < 0.99) {
    throw ShiftOutOfGrid("displaced lobes fall outside the grids");
  }
  normalize(jsa);
  return jsa;
}

JsaMatrix apply_bin_map(const JsaMatrix& jsa, double phase_phi_p) {
  if (!jsa.grid1.same_axis(jsa.grid2)) {
    throw NonSquareGrid("bin map needs a shared square grid");
  }
  const std::complex<double> phase(std::cos(phase_phi_p),
                                   std::sin(phase_phi_p));
  JsaMatrix out;
  out.grid1 = jsa.grid1;
  out.grid2 = jsa.grid2;
  out.amplitudes =
      jsa.amplitudes - phase * jsa.amplitudes.transpose().eval();
  normalize(out);
  return out;
}

Eigen::MatrixXd jsi_of(const JsaMatrix& jsa) {
  return jsa.amplitudes.cwiseAbs2();
}

JsaMatrix simulate_state(const StateConfig& config, const FrequencyGrid& grid) {
  config.validate();
  JsaMatrix displaced = displace_antidiagonal(grid, grid, config.pump,
                                              config.resolved_pmf(),
                                              config.bin_separation);
  return apply_bin_map(displaced, config.phase_phi_p);
}

JsaMatrix ideal_four_lobe_state(const FrequencyGrid& grid, double delta,
                                double sigma, double phi) {
  if (!(delta > 0.0) || !(sigma > 0.0)) {
    throw InvalidSpec("ideal state needs delta > 0 and sigma > 0");
  }
  PumpSpec pump;
  pump.center_wavelength = grid.center_wavelength / 2.0;
  pump.shape = PumpShape::Gaussian;
  // Matched pump: a Gaussian of width 2w factorizes each displaced HG1
  // lobe into exactly two Schmidt modes.
  pump.pulse_duration_fwhm = gaussian_duration_for_width(sigma);
  PmfSpec pmf;
  pmf.order = 1;
  pmf.width = sigma / 2.0;
  pmf.mismatch_offset = delta / 2.0;
  JsaMatrix lobe = evaluate_model(grid, grid, pump, pmf);
  if (lobe.amplitudes.cwiseAbs().maxCoeff() < 1e-300) {
    throw GridMismatch("grid does not cover the requested bins");
  }
  normalize(lobe);
  return apply_bin_map(lobe, phi);
}

}  // namespace bst
