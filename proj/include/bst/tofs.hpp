#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "bst/grid.hpp"

namespace bst {

/// Fiber-dispersion time-of-flight spectrometer settings.
struct TofsConfig {
  double dispersion = 20.0;             // ps/nm/km
  double fiber_length = 20.0;           // km
  double jitter_fwhm = 50.0;            // ps per detector
  double repetition_period = 12.5;      // ns
  double reference_wavelength = 1540.0; // nm mapped to zero delay
  double timing_resolution = 1.0;       // ps
  double survival1 = 1.0;               // per-photon Bernoulli survival
  double survival2 = 1.0;

  double dispersion_total() const { return dispersion * fiber_length; }
  double period_ps() const { return repetition_period * 1000.0; }
  /// Wavelength span that fits one repetition period without wrapping.
  double unambiguous_span_nm() const {
    return period_ps() / dispersion_total();
  }
  void validate() const;
};

struct TimetagEvent {
  int channel = 0;      // 1 or 2
  double time_ps = 0.0; // since epoch, an integer multiple of the resolution
};

struct Histogram2D {
  int n_bins = 0;
  double bin_width = 25.0;  // ps
  double origin1 = 0.0;     // ps
  double origin2 = 0.0;     // ps
  Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> counts;

  long long total() const { return counts.sum(); }
};

struct CoincidenceStats {
  long long accepted = 0;         // coincidences in the histogram
  long long dropped_photons = 0;  // photons without a histogrammed partner
};

/// n independent draws from the discrete JSI distribution (alias table),
/// each jittered uniformly within its wavelength bin. Deterministic for a
/// given seed.
std::vector<std::pair<double, double>> sample_pairs(
    const Eigen::MatrixXd& jsi, const FrequencyGrid& grid1,
    const FrequencyGrid& grid2, long long n, std::uint64_t seed);

/// Linear dispersion mapping, ps per nm relative to the reference.
double wavelength_to_delay(double wavelength_nm, const TofsConfig& cfg);
double delay_to_wavelength(double delay_ps, const TofsConfig& cfg);

/// Full detection chain: per-pulse epoch, dispersion delay, Gaussian
/// detector jitter, wrap into the pulse period, quantize, time-sort.
std::vector<TimetagEvent> simulate_timetags(
    const std::vector<std::pair<double, double>>& pairs, const TofsConfig& cfg,
    std::uint64_t seed);

/// Pairs one channel-1 with one channel-2 event per pulse window and
/// histograms (t1 mod period, t2 mod period) relative to the origins.
/// Windows with anything other than one event per channel are dropped.
Histogram2D bin_coincidences(const std::vector<TimetagEvent>& events,
                             const TofsConfig& cfg, int bins, double bin_width,
                             CoincidenceStats* stats = nullptr,
                             double origin1 = 0.0, double origin2 = 0.0);

/// JSI on a wavelength-uniform grid (axes in nm, bin centers).
struct WavelengthJsi {
  Eigen::ArrayXd axis1_nm;
  Eigen::ArrayXd axis2_nm;
  Eigen::MatrixXd density;  // integrates to 1 over nm^2
};

WavelengthJsi reconstruct_jsi(const Histogram2D& h, const TofsConfig& cfg);

/// Aggregates a model JSI (on frequency grids) into the wavelength bins of
/// a histogram layout, for like-for-like comparison with measured counts.
Eigen::MatrixXd bin_model_jsi(const Eigen::MatrixXd& jsi,
                              const FrequencyGrid& grid1,
                              const FrequencyGrid& grid2,
                              const Histogram2D& layout,
                              const TofsConfig& cfg);

double normalized_cross_correlation(const Eigen::MatrixXd& a,
                                    const Eigen::MatrixXd& b);

}  // namespace bst
