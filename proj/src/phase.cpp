#include "bst/phase.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "bst/errors.hpp"
#include "bst/fit.hpp"
#include "bst/hom.hpp"
#include "bst/parallel.hpp"
#include "bst/rng.hpp"
#include "bst/schmidt.hpp"
#include "bst/units.hpp"

namespace bst {

namespace {

double diff_coordinate(double lambda1_nm, double lambda2_nm) {
  return (angular_frequency(lambda1_nm) - angular_frequency(lambda2_nm)) / 2.0;
}

int band_of(double x, const std::array<double, 3>& boundaries) {
  int band = 0;
  while (band < 3 && x >= boundaries[static_cast<std::size_t>(band)]) ++band;
  return band;
}

Eigen::MatrixXd masked_sqrt(const Eigen::MatrixXd& jsi, const PhaseMask& mask) {
  if (jsi.rows() != mask.signs.rows() || jsi.cols() != mask.signs.cols())
    throw GridMismatch("mask shape does not match the JSI");
  if (jsi.minCoeff() < 0.0)
    throw NegativeInput("JSI must be nonnegative");
  return jsi.cwiseSqrt().cwiseProduct(mask.signs);
}

/// Per-cell sqrt of the angular measure for arbitrary wavelength axes.
Eigen::ArrayXd root_measure_weights(const Eigen::ArrayXd& axis_nm) {
  const Eigen::Index n = axis_nm.size();
  Eigen::ArrayXd w(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double lo = i > 0 ? (axis_nm(i - 1) + axis_nm(i)) / 2.0
                            : axis_nm(0) - (axis_nm(1) - axis_nm(0)) / 2.0;
    const double hi = i + 1 < n ? (axis_nm(i) + axis_nm(i + 1)) / 2.0
                                : axis_nm(n - 1) + (axis_nm(n - 1) - axis_nm(n - 2)) / 2.0;
    w(i) = std::sqrt(std::abs(angular_frequency(lo) - angular_frequency(hi)));
  }
  return w;
}

double schmidt_number_weighted(const Eigen::MatrixXd& amplitudes,
                               const Eigen::ArrayXd& row_w,
                               const Eigen::ArrayXd& col_w) {
  const Eigen::MatrixXd weighted = row_w.matrix().asDiagonal() * amplitudes *
                                   col_w.matrix().asDiagonal();
  return schmidt_number(schmidt_coefficients(weighted));
}

}  // namespace

PhaseMask build_phase_mask(
    const Eigen::ArrayXd& axis1_nm, const Eigen::ArrayXd& axis2_nm,
    const std::array<std::pair<double, double>, 4>& lobe_centers) {
  std::array<std::pair<double, double>, 4> centers = lobe_centers;
  std::sort(centers.begin(), centers.end(),
            [](const auto& a, const auto& b) {
              return diff_coordinate(a.first, a.second) <
                     diff_coordinate(b.first, b.second);
            });
  PhaseMask mask;
  mask.lobe_centers = centers;
  std::array<double, 4> positions{};
  for (std::size_t k = 0; k < 4; ++k) {
    positions[k] = diff_coordinate(centers[k].first, centers[k].second);
  }
  for (std::size_t k = 0; k < 3; ++k) {
    if (!(positions[k + 1] - positions[k] > 1e-9)) {
      throw DegenerateCenters(
          "lobe centers do not separate along the difference coordinate");
    }
    mask.boundaries[k] = (positions[k] + positions[k + 1]) / 2.0;
  }

  Eigen::ArrayXd omega1 = axis1_nm.unaryExpr(
      [](double l) { return angular_frequency(l); });
  Eigen::ArrayXd omega2 = axis2_nm.unaryExpr(
      [](double l) { return angular_frequency(l); });
  mask.signs.resize(axis1_nm.size(), axis2_nm.size());
  for (Eigen::Index j = 0; j < axis2_nm.size(); ++j) {
    for (Eigen::Index i = 0; i < axis1_nm.size(); ++i) {
      const int band = band_of((omega1(i) - omega2(j)) / 2.0, mask.boundaries);
      mask.signs(i, j) = band % 2 == 0 ? -1.0 : 1.0;
    }
  }
  return mask;
}

PhaseMask build_phase_mask_auto(const Eigen::MatrixXd& jsi,
                                const Eigen::ArrayXd& axis1_nm,
                                const Eigen::ArrayXd& axis2_nm) {
  const std::vector<Lobe> lobes = detect_lobes(jsi, axis1_nm, axis2_nm);
  if (lobes.size() < 4) {
    throw DegenerateCenters("expected four JSI lobes, found " +
                            std::to_string(lobes.size()));
  }
  std::array<std::pair<double, double>, 4> centers;
  for (std::size_t k = 0; k < 4; ++k) {
    centers[k] = {lobes[k].lambda1, lobes[k].lambda2};
  }
  return build_phase_mask(axis1_nm, axis2_nm, centers);
}

JsaMatrix jsa_from_jsi(const Eigen::MatrixXd& jsi, const FrequencyGrid& grid1,
                       const FrequencyGrid& grid2, const PhaseMask& mask) {
  if (jsi.rows() != grid1.n_points || jsi.cols() != grid2.n_points)
    throw GridMismatch("JSI shape does not match the grids");
  JsaMatrix out;
  out.grid1 = grid1;
  out.grid2 = grid2;
  out.amplitudes = masked_sqrt(jsi, mask).cast<std::complex<double>>();
  const double sq = out.squared_norm();
  if (!(sq > 0.0)) throw ZeroNorm("JSI carries no intensity");
  out.amplitudes /= std::sqrt(sq);
  out.normalized = true;
  return out;
}

double schmidt_number_masked(const Eigen::MatrixXd& jsi,
                             const Eigen::ArrayXd& axis1_nm,
                             const Eigen::ArrayXd& axis2_nm,
                             const PhaseMask& mask) {
  return schmidt_number_weighted(masked_sqrt(jsi, mask),
                                 root_measure_weights(axis1_nm),
                                 root_measure_weights(axis2_nm));
}

KEstimate monte_carlo_schmidt(const Eigen::MatrixXd& counts,
                              const Eigen::ArrayXd& axis1_nm,
                              const Eigen::ArrayXd& axis2_nm,
                              const PhaseMask& mask, int rounds,
                              std::uint64_t seed) {
  if (rounds < 2) throw InvalidSpec("monte carlo needs at least 2 rounds");
  if (counts.size() == 0 || counts.sum() <= 0.0)
    throw EmptyCounts("count matrix is empty");
  if (counts.minCoeff() < 0.0)
    throw EmptyCounts("count matrix has negative entries");

  const Eigen::ArrayXd row_w = root_measure_weights(axis1_nm);
  const Eigen::ArrayXd col_w = root_measure_weights(axis2_nm);

  std::vector<double> ks(static_cast<std::size_t>(rounds));
  parallel_for(0, rounds, [&](int round) {
    SplitMix64 rng(derive_seed(seed, static_cast<std::uint64_t>(round)));
    Eigen::MatrixXd resampled(counts.rows(), counts.cols());
    for (Eigen::Index j = 0; j < counts.cols(); ++j) {
      for (Eigen::Index i = 0; i < counts.rows(); ++i) {
        resampled(i, j) =
            static_cast<double>(poisson(counts(i, j), rng));
      }
    }
    const Eigen::MatrixXd amplitudes =
        resampled.cwiseSqrt().cwiseProduct(mask.signs);
    ks[static_cast<std::size_t>(round)] =
        schmidt_number_weighted(amplitudes, row_w, col_w);
  });

  double mean = 0.0;
  for (double k : ks) mean += k;
  mean /= static_cast<double>(rounds);
  double var = 0.0;
  for (double k : ks) var += (k - mean) * (k - mean);
  var /= static_cast<double>(rounds - 1);

  KEstimate est;
  est.mean = mean;
  est.bound = 3.0 * std::sqrt(var);
  est.rounds = rounds;
  est.seed = seed;
  return est;
}

int PhaseReport::selected_count() const {
  int n = 0;
  for (const CandidateReport& c : candidates) n += c.selected ? 1 : 0;
  return n;
}

double PhaseReport::selected_phi() const {
  if (ambiguous()) {
    throw Ambiguous("phase disambiguation selected " +
                    std::to_string(selected_count()) + " candidates");
  }
  for (const CandidateReport& c : candidates) {
    if (c.selected) return c.phi;
  }
  throw Ambiguous("no candidate selected");
}

PhaseReport disambiguate_phase(const Eigen::MatrixXd& jsi,
                               const Eigen::ArrayXd& axis1_nm,
                               const Eigen::ArrayXd& axis2_nm,
                               const StateConfig& model,
                               const FrequencyGrid& model_grid,
                               const std::vector<double>& candidate_phis,
                               double fit_phi, double fit_phi_err) {
  if (candidate_phis.size() < 2)
    throw InvalidSpec("disambiguation needs at least 2 candidate phases");

  // Anchor the synthesized bin separation to the measured lobes: the two
  // pair centroids sit at +-delta/2 along the difference coordinate.
  const PhaseMask detected = build_phase_mask_auto(jsi, axis1_nm, axis2_nm);
  std::array<double, 4> positions{};
  for (std::size_t k = 0; k < 4; ++k) {
    positions[k] = diff_coordinate(detected.lobe_centers[k].first,
                                   detected.lobe_centers[k].second);
  }
  const double delta = (positions[2] + positions[3]) / 2.0 -
                       (positions[0] + positions[1]) / 2.0;
  // Invert delta = w(l0 - s/2) - w(l0 + s/2) for the separation in nm.
  const double l0 = model.degenerate_wavelength();
  const double c2pi = 2.0 * std::numbers::pi * kSpeedOfLight;
  const double separation_nm =
      (std::sqrt(c2pi * c2pi + delta * delta * l0 * l0) - c2pi) / (delta / 2.0);

  const Eigen::ArrayXd delays = Eigen::ArrayXd::LinSpaced(161, -8.0, 8.0);
  PhaseReport report;
  report.fit_phi = fit_phi;
  report.fit_phi_err = fit_phi_err;
  report.detected_separation = delta;
  for (double phi : candidate_phis) {
    StateConfig candidate = model;
    candidate.bin_separation = separation_nm;
    candidate.phase_phi_p = phi;
    const JsaMatrix synthesized = simulate_state(candidate, model_grid);

    CandidateReport entry;
    entry.phi = phi;
    entry.imag_norm_fraction =
        synthesized.amplitudes.imag().squaredNorm() * synthesized.measure();

    HomCurve predicted = hom_from_jsa(synthesized, delays);
    const FitResult fit = fit_interferogram_auto(predicted);
    entry.hom_phase_residual = wrap_pi(fit.params.phase - fit_phi);
    entry.selected = std::abs(entry.hom_phase_residual) <= fit_phi_err;
    report.candidates.push_back(entry);
  }
  return report;
}

}  // namespace bst
