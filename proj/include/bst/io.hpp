#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "bst/fit.hpp"
#include "bst/hom.hpp"
#include "bst/jsa.hpp"
#include "bst/phase.hpp"
#include "bst/schmidt.hpp"
#include "bst/tofs.hpp"

namespace bst {

// ---- BJSA binary matrix container ------------------------------------
// 64-byte little-endian header: magic "BJSA", u32 version, u32 n1, u32 n2,
// four f64 axis parameters (center/span per axis; origin/span for
// histograms), u64 flags, u64 reserved; then row-major interleaved
// (re, im) f64 payload.

inline constexpr std::uint64_t kBjsaFlagNormalized = 1;
inline constexpr std::uint64_t kBjsaFlagWavelengthAxes = 2;
inline constexpr std::uint64_t kBjsaFlagHistogram = 4;

void write_jsa(const std::string& path, const JsaMatrix& jsa);
JsaMatrix read_jsa(const std::string& path);

void write_bjsa_matrix(const std::string& path, const Eigen::MatrixXcd& m,
                       double axis1_a, double axis1_b, double axis2_a,
                       double axis2_b, std::uint64_t flags);
struct BjsaMatrix {
  Eigen::MatrixXcd values;
  double axis1_a = 0.0, axis1_b = 0.0;
  double axis2_a = 0.0, axis2_b = 0.0;
  std::uint64_t flags = 0;
};
BjsaMatrix read_bjsa_matrix(const std::string& path);

void write_histogram(const std::string& path, const Histogram2D& h);
Histogram2D read_histogram(const std::string& path);

// ---- text formats -----------------------------------------------------

void write_jsa_csv(const std::string& path, const JsaMatrix& jsa);

void write_jsi_csv(const std::string& path, const Eigen::MatrixXd& jsi,
                   const Eigen::ArrayXd& axis1_nm,
                   const Eigen::ArrayXd& axis2_nm);
struct JsiCsv {
  Eigen::ArrayXd axis1_nm;
  Eigen::ArrayXd axis2_nm;
  Eigen::MatrixXd values;
};
JsiCsv read_jsi_csv(const std::string& path);

void write_hom_csv(const std::string& path, const HomCurve& curve);
void write_band_csv(const std::string& path, const HomCurve& lower,
                    const HomCurve& upper);
/// Accepts (delay_ps, counts), (position_mm, counts) or
/// (position_mm, delay_ps, counts); malformed rows report their line.
HomCurve read_hom_csv(const std::string& path);

void write_mask_csv(const std::string& path, const PhaseMask& mask);

void write_timetags_csv(const std::string& path,
                        const std::vector<TimetagEvent>& events);
/// Binary stream: 24-byte header (magic "BTTG", u32 version, f64
/// resolution ps, u64 count) then (u8 channel, u64 time in resolution
/// units) records.
void write_timetags(const std::string& path,
                    const std::vector<TimetagEvent>& events,
                    double timing_resolution);
std::vector<TimetagEvent> read_timetags(const std::string& path);

/// 8-bit PGM (P5) heatmap, linearly scaled up to the given percentile of
/// the positive values.
void write_pgm(const std::string& path, const Eigen::MatrixXd& m,
               double percentile = 99.5);

// ---- JSON results -----------------------------------------------------

void write_schmidt_json(const std::string& path, const SchmidtDecomposition& d,
                        const std::string& modes1_file,
                        const std::string& modes2_file);

void write_fit_json(const std::string& path, const FitResult& fit);
FitResult read_fit_json(const std::string& path);

void write_report_json(const std::string& path, const PhaseReport& report,
                       const KEstimate& k);

}  // namespace bst
