#include "bst/tofs.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "bst/errors.hpp"
#include "bst/rng.hpp"

namespace bst {

namespace {

constexpr double kFwhmToSigma = 2.3548200450309493;  // 2 sqrt(2 ln 2)

double floor_mod(double x, double period) {
  const double r = std::fmod(x, period);
  return r < 0.0 ? r + period : r;
}

}  // namespace

void TofsConfig::validate() const {
  if (!(dispersion > 0.0)) throw InvalidSpec("tofs.dispersion: must be > 0");
  if (!(fiber_length > 0.0)) throw InvalidSpec("tofs.fiber_length: must be > 0");
  if (jitter_fwhm < 0.0) throw InvalidSpec("tofs.jitter_fwhm: must be >= 0");
  if (!(repetition_period > 0.0))
    throw InvalidSpec("tofs.repetition_period: must be > 0");
  if (!(reference_wavelength > 0.0))
    throw InvalidSpec("tofs.reference_wavelength: must be > 0");
  if (!(timing_resolution > 0.0))
    throw InvalidSpec("tofs.timing_resolution: must be > 0");
  if (survival1 < 0.0 || survival1 > 1.0 || survival2 < 0.0 || survival2 > 1.0)
    throw InvalidSpec("tofs.survival: must lie in [0, 1]");
}

std::vector<std::pair<double, double>> sample_pairs(
    const Eigen::MatrixXd& jsi, const FrequencyGrid& grid1,
    const FrequencyGrid& grid2, long long n, std::uint64_t seed) {
  if (n < 0) throw InvalidSpec("sample_pairs: n must be >= 0");
  if (jsi.rows() != grid1.n_points || jsi.cols() != grid2.n_points)
    throw GridMismatch("JSI shape does not match the grids");
  if (jsi.minCoeff() < 0.0)
    throw NegativeInput("JSI must be nonnegative");

  std::vector<double> weights(jsi.size());
  for (Eigen::Index j = 0; j < jsi.cols(); ++j) {
    for (Eigen::Index i = 0; i < jsi.rows(); ++i) {
      weights[static_cast<std::size_t>(i * jsi.cols() + j)] = jsi(i, j);
    }
  }
  const AliasTable table(weights);  // throws EmptyDistribution on zero mass

  // Wavelength edges of each angular-frequency bin (lambda decreasing in
  // omega, so the low edge comes from the high-omega side).
  const auto edges = [](const FrequencyGrid& g) {
    std::pair<Eigen::ArrayXd, Eigen::ArrayXd> e;
    e.first = 2.0 * std::numbers::pi * kSpeedOfLight / (g.axis + g.step / 2.0);
    e.second = 2.0 * std::numbers::pi * kSpeedOfLight / (g.axis - g.step / 2.0);
    return e;
  };
  const auto [lo1, hi1] = edges(grid1);
  const auto [lo2, hi2] = edges(grid2);

  SplitMix64 rng(derive_seed(seed, 0x70616972));
  std::vector<std::pair<double, double>> out;
  out.reserve(static_cast<std::size_t>(n));
  for (long long k = 0; k < n; ++k) {
    const std::size_t cell = table.sample(rng);
    const Eigen::Index i = static_cast<Eigen::Index>(cell) / jsi.cols();
    const Eigen::Index j = static_cast<Eigen::Index>(cell) % jsi.cols();
    const double l1 = lo1(i) + rng.uniform() * (hi1(i) - lo1(i));
    const double l2 = lo2(j) + rng.uniform() * (hi2(j) - lo2(j));
    out.emplace_back(l1, l2);
  }
  return out;
}

double wavelength_to_delay(double wavelength_nm, const TofsConfig& cfg) {
  return cfg.dispersion_total() * (wavelength_nm - cfg.reference_wavelength);
}

double delay_to_wavelength(double delay_ps, const TofsConfig& cfg) {
  return cfg.reference_wavelength + delay_ps / cfg.dispersion_total();
}

std::vector<TimetagEvent> simulate_timetags(
    const std::vector<std::pair<double, double>>& pairs, const TofsConfig& cfg,
    std::uint64_t seed) {
  cfg.validate();
  const double period = cfg.period_ps();
  const double sigma = cfg.jitter_fwhm / kFwhmToSigma;
  const double res = cfg.timing_resolution;
  const bool lossy = cfg.survival1 < 1.0 || cfg.survival2 < 1.0;

  std::vector<TimetagEvent> events;
  events.reserve(2 * pairs.size());
  // Per-pair derived streams keep the output independent of any sharding
  // of the pulse-index range.
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    SplitMix64 rng(derive_seed(seed, k));
    GaussianGen gauss(rng.next());
    const double epoch = static_cast<double>(k) * period;
    const auto emit = [&](int channel, double wavelength, double survival) {
      if (lossy && rng.uniform() >= survival) return;
      double offset = wavelength_to_delay(wavelength, cfg) + sigma * gauss();
      offset = floor_mod(offset, period);
      double t = epoch + offset;
      t = std::round(t / res) * res;
      events.push_back({channel, t});
    };
    emit(1, pairs[k].first, cfg.survival1);
    emit(2, pairs[k].second, cfg.survival2);
  }
  std::sort(events.begin(), events.end(),
            [](const TimetagEvent& a, const TimetagEvent& b) {
              return a.time_ps < b.time_ps ||
                     (a.time_ps == b.time_ps && a.channel < b.channel);
            });
  return events;
}

Histogram2D bin_coincidences(const std::vector<TimetagEvent>& events,
                             const TofsConfig& cfg, int bins, double bin_width,
                             CoincidenceStats* stats, double origin1,
                             double origin2) {
  if (bins < 1) throw InvalidSpec("bin_coincidences: bins must be >= 1");
  if (!(bin_width > 0.0))
    throw InvalidSpec("bin_coincidences: bin_width must be > 0");
  const double period = cfg.period_ps();

  Histogram2D h;
  h.n_bins = bins;
  h.bin_width = bin_width;
  h.origin1 = origin1;
  h.origin2 = origin2;
  h.counts = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>::Zero(
      bins, bins);

  // Group photons by pulse window. Simulated streams arrive time-sorted
  // and can be walked in place; anything else gets sorted first.
  const auto by_time = [](const TimetagEvent& a, const TimetagEvent& b) {
    return a.time_ps < b.time_ps;
  };
  std::vector<TimetagEvent> scratch;
  const std::vector<TimetagEvent>* ordered = &events;
  if (!std::is_sorted(events.begin(), events.end(), by_time)) {
    scratch = events;
    std::sort(scratch.begin(), scratch.end(), by_time);
    ordered = &scratch;
  }

  long long accepted = 0;
  long long dropped = 0;
  std::size_t i = 0;
  while (i < ordered->size()) {
    const long long pulse =
        static_cast<long long>(std::floor((*ordered)[i].time_ps / period));
    double t1 = 0.0, t2 = 0.0;
    int n1 = 0, n2 = 0;
    std::size_t j = i;
    for (; j < ordered->size(); ++j) {
      const TimetagEvent& e = (*ordered)[j];
      if (static_cast<long long>(std::floor(e.time_ps / period)) != pulse) break;
      if (e.channel == 1) {
        t1 = e.time_ps;
        ++n1;
      } else {
        t2 = e.time_ps;
        ++n2;
      }
    }
    bool used = false;
    if (n1 == 1 && n2 == 1) {
      const double o1 = floor_mod(t1, period) - h.origin1;
      const double o2 = floor_mod(t2, period) - h.origin2;
      const long long b1 = static_cast<long long>(std::floor(o1 / bin_width));
      const long long b2 = static_cast<long long>(std::floor(o2 / bin_width));
      if (b1 >= 0 && b1 < bins && b2 >= 0 && b2 < bins) {
        ++h.counts(static_cast<Eigen::Index>(b1), static_cast<Eigen::Index>(b2));
        ++accepted;
        used = true;
      }
    }
    if (!used) dropped += n1 + n2;
    i = j;
  }
  if (stats) {
    stats->accepted = accepted;
    stats->dropped_photons = dropped;
  }
  return h;
}

WavelengthJsi reconstruct_jsi(const Histogram2D& h, const TofsConfig& cfg) {
  const long long total = h.total();
  if (total <= 0) throw EmptyHistogram("histogram holds no coincidences");
  WavelengthJsi out;
  out.axis1_nm.resize(h.n_bins);
  out.axis2_nm.resize(h.n_bins);
  for (int i = 0; i < h.n_bins; ++i) {
    const double t1 = h.origin1 + (i + 0.5) * h.bin_width;
    const double t2 = h.origin2 + (i + 0.5) * h.bin_width;
    out.axis1_nm(i) = delay_to_wavelength(t1, cfg);
    out.axis2_nm(i) = delay_to_wavelength(t2, cfg);
  }
  const double bin_nm = h.bin_width / cfg.dispersion_total();
  out.density = h.counts.cast<double>() /
                (static_cast<double>(total) * bin_nm * bin_nm);
  return out;
}

Eigen::MatrixXd bin_model_jsi(const Eigen::MatrixXd& jsi,
                              const FrequencyGrid& grid1,
                              const FrequencyGrid& grid2,
                              const Histogram2D& layout,
                              const TofsConfig& cfg) {
  const auto bin_of = [&](double wavelength, double origin) {
    const double delay = wavelength_to_delay(wavelength, cfg) - origin;
    return static_cast<long long>(std::floor(delay / layout.bin_width));
  };
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(layout.n_bins, layout.n_bins);
  const Eigen::ArrayXd l1 = grid1.wavelength_axis();
  const Eigen::ArrayXd l2 = grid2.wavelength_axis();
  for (Eigen::Index i = 0; i < jsi.rows(); ++i) {
    const long long b1 = bin_of(l1(i), layout.origin1);
    if (b1 < 0 || b1 >= layout.n_bins) continue;
    for (Eigen::Index j = 0; j < jsi.cols(); ++j) {
      const long long b2 = bin_of(l2(j), layout.origin2);
      if (b2 < 0 || b2 >= layout.n_bins) continue;
      out(static_cast<Eigen::Index>(b1), static_cast<Eigen::Index>(b2)) +=
          jsi(i, j);
    }
  }
  return out;
}

double normalized_cross_correlation(const Eigen::MatrixXd& a,
                                    const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw GridMismatch("cross-correlation needs matching shapes");
  const double denom = a.norm() * b.norm();
  if (!(denom > 0.0)) return 0.0;
  return a.cwiseProduct(b).sum() / denom;
}

}  // namespace bst
