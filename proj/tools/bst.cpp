// bst: simulation and analysis pipeline for pulse-mode / frequency-bin
// hyper-entangled photon pairs. Subcommands cover state simulation,
// time-of-flight JSI reconstruction, HOM theory curves, interferogram
// fitting and phase inference.

#include <array>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bst/config.hpp"
#include "bst/errors.hpp"
#include "bst/io.hpp"
#include "bst/parallel.hpp"
#include "bst/peaks.hpp"
#include "bst/schmidt.hpp"
#include "bst/units.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitFit = 4;
constexpr int kExitAmbiguous = 5;

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
};

bst::PipelineConfig load_config(const CommonOpts& opts) {
  bst::PipelineConfig cfg = bst::load_pipeline_config(opts.config_path);
  if (!opts.out_dir.empty()) cfg.output_dir = opts.out_dir;
  fs::create_directories(cfg.output_dir);
  return cfg;
}

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

std::string format_phi(double phi) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", phi);
  return buf;
}

int run_simulate(const CommonOpts& opts) {
  const bst::PipelineConfig cfg = load_config(opts);
  const bst::FrequencyGrid grid = cfg.make_frequency_grid();
  const bst::JsaMatrix state = bst::simulate_state(cfg.state, grid);
  const Eigen::MatrixXd jsi = bst::jsi_of(state);
  const bst::SchmidtDecomposition schmidt = bst::decompose(state);

  bst::write_jsa(join(cfg.output_dir, "jsa.bin"), state);
  bst::write_jsi_csv(join(cfg.output_dir, "jsi.csv"), jsi,
                     grid.wavelength_axis(), grid.wavelength_axis());
  bst::write_pgm(join(cfg.output_dir, "jsi.pgm"), jsi);
  bst::write_schmidt_json(join(cfg.output_dir, "schmidt.json"), schmidt,
                          join(cfg.output_dir, "modes1.bin"),
                          join(cfg.output_dir, "modes2.bin"));
  std::printf("wrote jsa.bin, jsi.csv, jsi.pgm, schmidt.json to %s\n",
              cfg.output_dir.c_str());
  std::printf("schmidt_number %.6f\n", bst::schmidt_number(schmidt));
  return 0;
}

int run_tofs(const CommonOpts& opts, long long pairs,
             std::optional<std::uint64_t> seed, int bins, double bin_width,
             bool also_csv) {
  const bst::PipelineConfig cfg = load_config(opts);
  if (pairs < 1) throw bst::InvalidSpec("config error: --pairs: must be >= 1");
  const bst::FrequencyGrid grid = cfg.make_frequency_grid();
  const bst::JsaMatrix state = bst::simulate_state(cfg.state, grid);
  const Eigen::MatrixXd jsi = bst::jsi_of(state);
  const std::uint64_t used_seed = seed.value_or(cfg.mc.seed);

  if (grid.span > cfg.tofs.unambiguous_span_nm()) {
    std::fprintf(stderr,
                 "warning: grid span %.3f nm exceeds the unambiguous "
                 "time-of-flight range %.3f nm; the spectrum will wrap\n",
                 grid.span, cfg.tofs.unambiguous_span_nm());
  }

  const auto sampled = bst::sample_pairs(jsi, grid, grid, pairs, used_seed);
  const auto events = bst::simulate_timetags(sampled, cfg.tofs, used_seed + 1);

  if (bins <= 0) {
    bins = static_cast<int>(std::floor(
        grid.span * cfg.tofs.dispersion_total() / bin_width + 0.5));
  }
  // Anchor the histogram at the grid's lower wavelength edge so the
  // reconstruction covers the simulated window.
  const double origin =
      bst::wavelength_to_delay(grid.min_wavelength(), cfg.tofs);
  bst::CoincidenceStats stats;
  const bst::Histogram2D hist = bst::bin_coincidences(
      events, cfg.tofs, bins, bin_width, &stats, origin, origin);
  const bst::WavelengthJsi recon = bst::reconstruct_jsi(hist, cfg.tofs);

  bst::write_timetags(join(cfg.output_dir, "timetags.bin"), events,
                      cfg.tofs.timing_resolution);
  if (also_csv) {
    bst::write_timetags_csv(join(cfg.output_dir, "timetags.csv"), events);
  }
  bst::write_histogram(join(cfg.output_dir, "histogram.bin"), hist);
  bst::write_jsi_csv(join(cfg.output_dir, "jsi_reconstructed.csv"),
                     recon.density, recon.axis1_nm, recon.axis2_nm);
  bst::write_pgm(join(cfg.output_dir, "jsi_reconstructed.pgm"), recon.density);

  const Eigen::MatrixXd model =
      bst::bin_model_jsi(jsi, grid, grid, hist, cfg.tofs);
  const double ncc = bst::normalized_cross_correlation(
      hist.counts.cast<double>(), model);
  std::printf("accepted_coincidences %lld\n", stats.accepted);
  std::printf("model_correlation %.6f\n", ncc);
  std::printf("wrote timetags.bin, histogram.bin, jsi_reconstructed.csv/.pgm to %s\n",
              cfg.output_dir.c_str());
  return 0;
}

int run_hom(const CommonOpts& opts, const std::vector<double>& phi_override,
            long long band_counts) {
  const bst::PipelineConfig cfg = load_config(opts);
  const bst::FrequencyGrid grid = cfg.make_frequency_grid();
  const Eigen::ArrayXd delays = Eigen::ArrayXd::LinSpaced(
      cfg.hom.points, cfg.hom.delay_min, cfg.hom.delay_max);
  const std::vector<double> phis =
      phi_override.empty() ? cfg.hom.phis : phi_override;

  for (double phi : phis) {
    bst::StateConfig state_cfg = cfg.state;
    state_cfg.phase_phi_p = phi;
    const bst::JsaMatrix state = bst::simulate_state(state_cfg, grid);
    const bst::HomCurve curve = bst::hom_from_jsa(state, delays);

    bst::HomFitParams model;
    model.normalization = 1.0;
    model.visibility = 1.0;
    model.bin_separation =
        bst::angular_frequency(state_cfg.degenerate_wavelength() -
                               state_cfg.bin_separation / 2.0) -
        bst::angular_frequency(state_cfg.degenerate_wavelength() +
                               state_cfg.bin_separation / 2.0);
    model.bin_sigma = 2.0 * state_cfg.resolved_pmf().width;
    model.phase = phi;
    const auto [lower, upper] =
        bst::confidence_band(model, delays, band_counts, 3.0);

    const std::string tag = format_phi(phi);
    bst::write_hom_csv(join(cfg.output_dir, "hom_phi_" + tag + ".csv"), curve);
    bst::write_band_csv(join(cfg.output_dir, "hom_phi_" + tag + "_band.csv"),
                        lower, upper);
    std::printf("wrote hom_phi_%s.csv (+band)\n", tag.c_str());
  }
  return 0;
}

int run_fit(const std::string& data_path, const std::string& out_dir,
            const std::vector<std::pair<std::string, double>>& init_overrides,
            const std::vector<std::pair<std::string, std::pair<double, double>>>&
                bound_overrides) {
  fs::create_directories(out_dir);
  const bst::HomCurve data = bst::read_hom_csv(data_path);

  bst::FitBounds bounds;
  for (const auto& [name, interval] : bound_overrides) {
    bst::FitBounds::Interval iv{interval.first, interval.second};
    if (name == "normalization") bounds.normalization = iv;
    else if (name == "visibility") bounds.visibility = iv;
    else if (name == "bin_separation") bounds.bin_separation = iv;
    else if (name == "bin_sigma") bounds.bin_sigma = iv;
    else if (name == "phase") bounds.phase = iv;
  }

  bst::FitResult fit;
  if (init_overrides.empty()) {
    fit = bst::fit_interferogram_auto(data, bounds);
  } else {
    bst::HomFitParams init = bst::default_init(data);
    for (const auto& [name, value] : init_overrides) {
      if (name == "normalization") init.normalization = value;
      else if (name == "visibility") init.visibility = value;
      else if (name == "bin_separation") init.bin_separation = value;
      else if (name == "bin_sigma") init.bin_sigma = value;
      else if (name == "phase") init.phase = value;
    }
    fit = bst::fit_interferogram(data, init, bounds);
  }

  bst::write_fit_json(join(out_dir, "fit.json"), fit);
  {
    std::ofstream res(join(out_dir, "residuals.csv"));
    res.precision(12);
    res << "delay_ps,data,model,residual\n";
    for (Eigen::Index i = 0; i < data.delays.size(); ++i) {
      const double model = bst::pcc_analytic(fit.params, data.delays(i));
      res << data.delays(i) << ',' << data.values(i) << ',' << model << ','
          << (model - data.values(i)) << '\n';
    }
  }
  std::printf(
      "fit: N=%.6g V=%.4f delta=%.6g sigma=%.6g phi=%.6g converged=%d "
      "iterations=%d\n",
      fit.params.normalization, fit.params.visibility,
      fit.params.bin_separation, fit.params.bin_sigma, fit.params.phase,
      fit.converged ? 1 : 0, fit.iterations);
  std::printf("  delta/2pi %.4f THz, bin width %.4f THz\n",
              bst::thz_from_angular(fit.params.bin_separation),
              bst::thz_from_angular(2.0 * fit.params.bin_sigma));
  return fit.converged ? 0 : kExitFit;
}

int run_infer(const CommonOpts& opts, const std::string& jsi_path,
              const std::string& fit_path, std::string histogram_path,
              const std::vector<double>& phi_override,
              std::optional<int> rounds_override,
              std::optional<std::uint64_t> seed_override,
              double total_counts_override, double phi_tolerance) {
  const bst::PipelineConfig cfg = load_config(opts);
  const bst::JsiCsv jsi = bst::read_jsi_csv(jsi_path);
  const bst::FitResult fit = bst::read_fit_json(fit_path);

  const bst::PhaseMask mask =
      bst::build_phase_mask_auto(jsi.values, jsi.axis1_nm, jsi.axis2_nm);

  // Counts for the Poissonian Monte Carlo: the recorded histogram when
  // available, otherwise the JSI scaled to --total-counts.
  Eigen::MatrixXd counts;
  if (histogram_path.empty()) {
    const std::string sibling =
        (fs::path(jsi_path).parent_path() / "histogram.bin").string();
    if (fs::exists(sibling)) histogram_path = sibling;
  }
  if (!histogram_path.empty()) {
    const bst::Histogram2D hist = bst::read_histogram(histogram_path);
    if (hist.n_bins != jsi.values.rows()) {
      throw bst::FormatError("config error: histogram shape does not match the JSI");
    }
    counts = hist.counts.cast<double>();
  } else if (total_counts_override > 0.0) {
    counts = jsi.values * (total_counts_override / jsi.values.sum());
  } else {
    throw bst::InvalidSpec(
        "config error: need histogram.bin next to the JSI or --total-counts");
  }

  const int rounds = rounds_override.value_or(cfg.mc.rounds);
  const std::uint64_t seed = seed_override.value_or(cfg.mc.seed);
  const bst::KEstimate k = bst::monte_carlo_schmidt(
      counts, jsi.axis1_nm, jsi.axis2_nm, mask, rounds, seed);

  const double err =
      phi_tolerance > 0.0 ? phi_tolerance : 3.0 * fit.standard_errors(4);
  const std::vector<double> candidates =
      phi_override.empty() ? cfg.hom.phis : phi_override;
  const bst::FrequencyGrid model_grid =
      bst::make_grid(cfg.grid.center, cfg.grid.span, std::min(cfg.grid.n, 256));
  const bst::PhaseReport report = bst::disambiguate_phase(
      jsi.values, jsi.axis1_nm, jsi.axis2_nm, cfg.state, model_grid,
      candidates, fit.params.phase, err);

  bst::write_report_json(join(cfg.output_dir, "report.json"), report, k);
  {
    // Inferred JSA on the measured wavelength axes.
    Eigen::MatrixXd amp = jsi.values.cwiseSqrt().cwiseProduct(mask.signs);
    amp /= amp.norm();
    const double c1 = (jsi.axis1_nm(0) + jsi.axis1_nm(jsi.axis1_nm.size() - 1)) / 2.0;
    const double s1 = jsi.axis1_nm(jsi.axis1_nm.size() - 1) - jsi.axis1_nm(0);
    const double c2 = (jsi.axis2_nm(0) + jsi.axis2_nm(jsi.axis2_nm.size() - 1)) / 2.0;
    const double s2 = jsi.axis2_nm(jsi.axis2_nm.size() - 1) - jsi.axis2_nm(0);
    bst::write_bjsa_matrix(join(cfg.output_dir, "jsa_inferred.bin"),
                           amp.cast<std::complex<double>>(), c1, s1, c2, s2,
                           bst::kBjsaFlagWavelengthAxes);
    bst::write_mask_csv(join(cfg.output_dir, "mask.csv"), mask);
  }

  std::printf("schmidt_number %.6f +- %.6f (3 sigma, %d rounds)\n", k.mean,
              k.bound, k.rounds);
  for (const bst::CandidateReport& c : report.candidates) {
    std::printf("candidate phi=%.6g imag_fraction=%.3e residual=%.4f%s\n",
                c.phi, c.imag_norm_fraction, c.hom_phase_residual,
                c.selected ? " [selected]" : "");
  }
  std::printf("wrote report.json, jsa_inferred.bin, mask.csv to %s\n",
              cfg.output_dir.c_str());
  if (report.ambiguous()) {
    std::fprintf(stderr, "phase selection is ambiguous (%d candidates match)\n",
                 report.selected_count());
    return kExitAmbiguous;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"biphoton spectral toolkit"};
  app.require_subcommand(1);

  CommonOpts common;
  std::optional<std::uint64_t> seed;
  long long pairs = 1000000;
  int bins = 0;
  double bin_width = 25.0;
  bool tofs_csv = false;
  std::vector<double> phis;
  long long band_counts = 100000;
  std::string data_path, jsi_path, fit_path, histogram_path;
  std::optional<int> rounds;
  double total_counts = 0.0;
  double phi_tolerance = 0.0;
  std::vector<double> init_vals(5, -1.0);
  std::vector<std::vector<double>> bound_vals(5);

  auto add_common = [&](CLI::App* cmd, bool needs_config) {
    auto* opt = cmd->add_option("--config", common.config_path,
                                "pipeline JSON config");
    if (needs_config) opt->required();
    cmd->add_option("--out", common.out_dir, "output directory override");
  };

  CLI::App* sim = app.add_subcommand("simulate",
                                     "compose the hyper-entangled state; write "
                                     "jsa.bin, jsi.csv/.pgm, schmidt.json");
  add_common(sim, true);

  CLI::App* tofs = app.add_subcommand(
      "tofs", "sample pairs through the dispersive spectrometer and "
              "reconstruct the JSI");
  add_common(tofs, true);
  tofs->add_option("--pairs", pairs, "number of photon pairs");
  tofs->add_option("--seed", seed, "RNG seed (defaults to mc.seed)");
  tofs->add_option("--bins", bins, "histogram bins per axis (0 = from grid)");
  tofs->add_option("--bin-width", bin_width, "histogram bin width, ps");
  tofs->add_flag("--csv", tofs_csv, "also write timetags.csv");

  CLI::App* hom = app.add_subcommand(
      "hom", "theory HOM curves and 3-sigma bands per phase setting");
  add_common(hom, true);
  hom->add_option("--phi", phis, "phase list override, rad")->delimiter(',');
  hom->add_option("--band-counts", band_counts,
                  "total counts assumed for the Poissonian band");

  CLI::App* fit = app.add_subcommand("fit", "fit an interferogram CSV");
  fit->add_option("data", data_path, "CSV with delay_ps/position_mm and counts")
      ->required();
  fit->add_option("--out", common.out_dir, "output directory")->required();
  fit->add_option("--init-n", init_vals[0], "start value for N");
  fit->add_option("--init-v", init_vals[1], "start value for V");
  fit->add_option("--init-delta", init_vals[2], "start value for delta, rad/ps");
  fit->add_option("--init-sigma", init_vals[3], "start value for sigma, rad/ps");
  fit->add_option("--init-phi", init_vals[4], "start value for phi, rad");
  fit->add_option("--bound-n", bound_vals[0], "lo,hi bounds for N")->delimiter(',');
  fit->add_option("--bound-v", bound_vals[1], "lo,hi bounds for V")->delimiter(',');
  fit->add_option("--bound-delta", bound_vals[2], "lo,hi bounds for delta")->delimiter(',');
  fit->add_option("--bound-sigma", bound_vals[3], "lo,hi bounds for sigma")->delimiter(',');
  fit->add_option("--bound-phi", bound_vals[4], "lo,hi bounds for phi")->delimiter(',');

  CLI::App* infer = app.add_subcommand(
      "infer", "mask, Monte Carlo Schmidt number and phase disambiguation");
  add_common(infer, true);
  infer->add_option("--jsi", jsi_path, "reconstructed JSI csv")->required();
  infer->add_option("--fit", fit_path, "fit.json from the HOM measurement")
      ->required();
  infer->add_option("--histogram", histogram_path,
                    "count histogram for the Monte Carlo (default: sibling "
                    "histogram.bin)");
  infer->add_option("--phi", phis, "candidate phases, rad")->delimiter(',');
  infer->add_option("--rounds", rounds, "Monte Carlo rounds");
  infer->add_option("--seed", seed, "Monte Carlo seed");
  infer->add_option("--total-counts", total_counts,
                    "scale the JSI to this many counts when no histogram");
  infer->add_option("--phi-tolerance", phi_tolerance,
                    "selection radius, rad (default 3 standard errors)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (sim->parsed()) return run_simulate(common);
    if (tofs->parsed()) {
      return run_tofs(common, pairs, seed, bins, bin_width, tofs_csv);
    }
    if (hom->parsed()) return run_hom(common, phis, band_counts);
    if (fit->parsed()) {
      std::vector<std::pair<std::string, double>> init_overrides;
      const char* names[5] = {"normalization", "visibility", "bin_separation",
                              "bin_sigma", "phase"};
      for (int k = 0; k < 5; ++k) {
        if (fit->count(std::string("--init-") +
                       std::array{"n", "v", "delta", "sigma", "phi"}[k])) {
          init_overrides.emplace_back(names[k], init_vals[static_cast<std::size_t>(k)]);
        }
      }
      std::vector<std::pair<std::string, std::pair<double, double>>> bound_overrides;
      for (int k = 0; k < 5; ++k) {
        const auto& b = bound_vals[static_cast<std::size_t>(k)];
        if (b.size() == 2) bound_overrides.emplace_back(names[k], std::make_pair(b[0], b[1]));
      }
      return run_fit(data_path, common.out_dir, init_overrides, bound_overrides);
    }
    if (infer->parsed()) {
      return run_infer(common, jsi_path, fit_path, histogram_path, phis,
                       rounds, seed, total_counts, phi_tolerance);
    }
  } catch (const bst::InvalidSpec& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kExitConfig;
  } catch (const bst::NoConvergence& e) {
    std::fprintf(stderr, "fit did not converge: %s\n", e.what());
    return kExitFit;
  } catch (const bst::Ambiguous& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kExitAmbiguous;
  } catch (const bst::Error& e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return kExitNumeric;
  }
  return 0;
}
