#include "bst/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bst/config.hpp"
#include "bst/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "binary containers are written little-endian");

namespace bst {

namespace {

using nlohmann::json;

std::ofstream open_out(const std::string& path, std::ios::openmode mode) {
  std::ofstream out(path, mode);
  if (!out) throw FormatError("cannot open " + path + " for writing");
  return out;
}

std::ifstream open_in(const std::string& path, std::ios::openmode mode) {
  std::ifstream in(path, mode);
  if (!in) throw FormatError("cannot open " + path);
  return in;
}

struct BjsaHeader {
  char magic[4];
  std::uint32_t version;
  std::uint32_t n1;
  std::uint32_t n2;
  double axis1_a, axis1_b, axis2_a, axis2_b;
  std::uint64_t flags;
  std::uint64_t reserved;
};
static_assert(sizeof(BjsaHeader) == 64);

constexpr std::uint32_t kBjsaVersion = 1;
constexpr std::uint32_t kTimetagVersion = 1;

}  // namespace

void write_bjsa_matrix(const std::string& path, const Eigen::MatrixXcd& m,
                       double axis1_a, double axis1_b, double axis2_a,
                       double axis2_b, std::uint64_t flags) {
  BjsaHeader header{};
  std::memcpy(header.magic, "BJSA", 4);
  header.version = kBjsaVersion;
  header.n1 = static_cast<std::uint32_t>(m.rows());
  header.n2 = static_cast<std::uint32_t>(m.cols());
  header.axis1_a = axis1_a;
  header.axis1_b = axis1_b;
  header.axis2_a = axis2_a;
  header.axis2_b = axis2_b;
  header.flags = flags;
  header.reserved = 0;

  std::ofstream out = open_out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(&header), sizeof(header));
  std::vector<double> row(2 * static_cast<std::size_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row[2 * static_cast<std::size_t>(j)] = m(i, j).real();
      row[2 * static_cast<std::size_t>(j) + 1] = m(i, j).imag();
    }
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size() * sizeof(double)));
  }
  if (!out) throw FormatError("short write to " + path);
}

BjsaMatrix read_bjsa_matrix(const std::string& path) {
  std::ifstream in = open_in(path, std::ios::binary);
  BjsaHeader header{};
  in.read(reinterpret_cast<char*>(&header), sizeof(header));
  if (!in || std::memcmp(header.magic, "BJSA", 4) != 0) {
    throw FormatError(path + ": not a BJSA container");
  }
  if (header.version != kBjsaVersion) {
    throw FormatError(path + ": unknown BJSA version " +
                      std::to_string(header.version));
  }
  if (header.n1 == 0 || header.n2 == 0 || header.n1 > 100000 ||
      header.n2 > 100000) {
    throw FormatError(path + ": implausible matrix shape");
  }
  BjsaMatrix out;
  out.axis1_a = header.axis1_a;
  out.axis1_b = header.axis1_b;
  out.axis2_a = header.axis2_a;
  out.axis2_b = header.axis2_b;
  out.flags = header.flags;
  out.values.resize(header.n1, header.n2);
  std::vector<double> row(2 * static_cast<std::size_t>(header.n2));
  for (std::uint32_t i = 0; i < header.n1; ++i) {
    in.read(reinterpret_cast<char*>(row.data()),
            static_cast<std::streamsize>(row.size() * sizeof(double)));
    if (!in) throw FormatError(path + ": truncated payload");
    for (std::uint32_t j = 0; j < header.n2; ++j) {
      out.values(i, j) = {row[2 * j], row[2 * j + 1]};
    }
  }
  return out;
}

void write_jsa(const std::string& path, const JsaMatrix& jsa) {
  write_bjsa_matrix(path, jsa.amplitudes, jsa.grid1.center_wavelength,
                    jsa.grid1.span, jsa.grid2.center_wavelength,
                    jsa.grid2.span,
                    jsa.normalized ? kBjsaFlagNormalized : 0);
}

JsaMatrix read_jsa(const std::string& path) {
  const BjsaMatrix raw = read_bjsa_matrix(path);
  if (raw.flags & (kBjsaFlagWavelengthAxes | kBjsaFlagHistogram)) {
    throw FormatError(path + ": container does not hold a frequency-grid JSA");
  }
  JsaMatrix jsa;
  jsa.grid1 = make_grid(raw.axis1_a, raw.axis1_b,
                        static_cast<int>(raw.values.rows()));
  jsa.grid2 = make_grid(raw.axis2_a, raw.axis2_b,
                        static_cast<int>(raw.values.cols()));
  jsa.amplitudes = raw.values;
  jsa.normalized = (raw.flags & kBjsaFlagNormalized) != 0;
  return jsa;
}

void write_histogram(const std::string& path, const Histogram2D& h) {
  write_bjsa_matrix(path, h.counts.cast<double>().cast<std::complex<double>>(),
                    h.origin1, h.n_bins * h.bin_width, h.origin2,
                    h.n_bins * h.bin_width, kBjsaFlagHistogram);
}

Histogram2D read_histogram(const std::string& path) {
  const BjsaMatrix raw = read_bjsa_matrix(path);
  if (!(raw.flags & kBjsaFlagHistogram) || raw.values.rows() != raw.values.cols()) {
    throw FormatError(path + ": not a histogram container");
  }
  Histogram2D h;
  h.n_bins = static_cast<int>(raw.values.rows());
  h.bin_width = raw.axis1_b / h.n_bins;
  h.origin1 = raw.axis1_a;
  h.origin2 = raw.axis2_a;
  h.counts = raw.values.real().array().round().cast<long long>().matrix();
  return h;
}

// ---- text formats -----------------------------------------------------

void write_jsa_csv(const std::string& path, const JsaMatrix& jsa) {
  std::ofstream out = open_out(path, std::ios::out);
  out.precision(12);
  out << "wavelength1_nm,wavelength2_nm,re,im\n";
  const Eigen::ArrayXd l1 = jsa.grid1.wavelength_axis();
  const Eigen::ArrayXd l2 = jsa.grid2.wavelength_axis();
  for (Eigen::Index i = 0; i < jsa.amplitudes.rows(); ++i) {
    for (Eigen::Index j = 0; j < jsa.amplitudes.cols(); ++j) {
      out << l1(i) << ',' << l2(j) << ',' << jsa.amplitudes(i, j).real() << ','
          << jsa.amplitudes(i, j).imag() << '\n';
    }
  }
}

void write_jsi_csv(const std::string& path, const Eigen::MatrixXd& jsi,
                   const Eigen::ArrayXd& axis1_nm,
                   const Eigen::ArrayXd& axis2_nm) {
  std::ofstream out = open_out(path, std::ios::out);
  out.precision(12);
  out << "wavelength1_nm,wavelength2_nm,intensity\n";
  for (Eigen::Index i = 0; i < jsi.rows(); ++i) {
    for (Eigen::Index j = 0; j < jsi.cols(); ++j) {
      out << axis1_nm(i) << ',' << axis2_nm(j) << ',' << jsi(i, j) << '\n';
    }
  }
}

JsiCsv read_jsi_csv(const std::string& path) {
  std::ifstream in = open_in(path, std::ios::in);
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path + ": empty file");
  std::vector<double> l1, l2, v;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    double a, b, c;
    char c1, c2;
    std::istringstream row(line);
    if (!(row >> a >> c1 >> b >> c2 >> c) || c1 != ',' || c2 != ',') {
      throw FormatError(path + ": malformed row " + std::to_string(line_no));
    }
    l1.push_back(a);
    l2.push_back(b);
    v.push_back(c);
  }
  if (v.empty()) throw FormatError(path + ": no data rows");
  // Column axis repeats fastest; its period gives the shape.
  std::size_t n2 = 1;
  while (n2 < l2.size() && l2[n2] != l2[0]) ++n2;
  if (n2 == 0 || v.size() % n2 != 0) {
    throw FormatError(path + ": rows do not form a complete matrix");
  }
  const std::size_t n1 = v.size() / n2;
  JsiCsv out;
  out.axis1_nm.resize(static_cast<Eigen::Index>(n1));
  out.axis2_nm.resize(static_cast<Eigen::Index>(n2));
  out.values.resize(static_cast<Eigen::Index>(n1), static_cast<Eigen::Index>(n2));
  for (std::size_t j = 0; j < n2; ++j) out.axis2_nm(static_cast<Eigen::Index>(j)) = l2[j];
  for (std::size_t i = 0; i < n1; ++i) {
    out.axis1_nm(static_cast<Eigen::Index>(i)) = l1[i * n2];
    for (std::size_t j = 0; j < n2; ++j) {
      out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          v[i * n2 + j];
    }
  }
  return out;
}

void write_hom_csv(const std::string& path, const HomCurve& curve) {
  std::ofstream out = open_out(path, std::ios::out);
  out.precision(12);
  out << "delay_ps,counts\n";
  for (Eigen::Index i = 0; i < curve.delays.size(); ++i) {
    out << curve.delays(i) << ',' << curve.values(i) << '\n';
  }
}

void write_band_csv(const std::string& path, const HomCurve& lower,
                    const HomCurve& upper) {
  std::ofstream out = open_out(path, std::ios::out);
  out.precision(12);
  out << "delay_ps,lower,upper\n";
  for (Eigen::Index i = 0; i < lower.delays.size(); ++i) {
    out << lower.delays(i) << ',' << lower.values(i) << ',' << upper.values(i)
        << '\n';
  }
}

HomCurve read_hom_csv(const std::string& path) {
  std::ifstream in = open_in(path, std::ios::in);
  std::string header;
  if (!std::getline(in, header)) throw FormatError(path + ": empty file");
  std::vector<std::string> columns;
  {
    std::istringstream hs(header);
    std::string name;
    while (std::getline(hs, name, ',')) columns.push_back(name);
  }
  int delay_col = -1, counts_col = -1, position_col = -1;
  for (std::size_t k = 0; k < columns.size(); ++k) {
    if (columns[k] == "delay_ps") delay_col = static_cast<int>(k);
    if (columns[k] == "counts") counts_col = static_cast<int>(k);
    if (columns[k] == "position_mm") position_col = static_cast<int>(k);
  }
  if (counts_col < 0 || (delay_col < 0 && position_col < 0)) {
    throw FormatError(path + ": header must name counts and delay_ps (or position_mm)");
  }

  std::vector<double> delays, values;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> fields;
    std::istringstream row(line);
    std::string cell;
    bool bad = false;
    while (std::getline(row, cell, ',')) {
      try {
        std::size_t used = 0;
        fields.push_back(std::stod(cell, &used));
        if (used != cell.size()) bad = true;
      } catch (const std::exception&) {
        bad = true;
        break;
      }
    }
    if (bad || fields.size() != columns.size()) {
      throw FormatError(path + ": malformed row " + std::to_string(line_no));
    }
    const double tau = delay_col >= 0
                           ? fields[static_cast<std::size_t>(delay_col)]
                           : delay_from_stage_position(
                                 fields[static_cast<std::size_t>(position_col)]);
    delays.push_back(tau);
    values.push_back(fields[static_cast<std::size_t>(counts_col)]);
  }
  if (delays.size() < 2) throw FormatError(path + ": no data rows");

  HomCurve curve;
  curve.delays = Eigen::Map<Eigen::ArrayXd>(delays.data(),
                                            static_cast<Eigen::Index>(delays.size()));
  curve.values = Eigen::Map<Eigen::ArrayXd>(values.data(),
                                            static_cast<Eigen::Index>(values.size()));
  curve.kind = HomCurve::Kind::Counts;
  curve.validate();
  return curve;
}

void write_mask_csv(const std::string& path, const PhaseMask& mask) {
  std::ofstream out = open_out(path, std::ios::out);
  for (Eigen::Index i = 0; i < mask.signs.rows(); ++i) {
    for (Eigen::Index j = 0; j < mask.signs.cols(); ++j) {
      out << (mask.signs(i, j) > 0 ? 1 : -1)
          << (j + 1 < mask.signs.cols() ? ',' : '\n');
    }
  }
}

void write_timetags_csv(const std::string& path,
                        const std::vector<TimetagEvent>& events) {
  std::ofstream out = open_out(path, std::ios::out);
  out.precision(12);
  out << "channel,time_ps\n";
  for (const TimetagEvent& e : events) {
    out << e.channel << ',' << e.time_ps << '\n';
  }
}

void write_timetags(const std::string& path,
                    const std::vector<TimetagEvent>& events,
                    double timing_resolution) {
  std::ofstream out = open_out(path, std::ios::binary);
  const char magic[4] = {'B', 'T', 'T', 'G'};
  const std::uint32_t version = kTimetagVersion;
  const std::uint64_t count = events.size();
  out.write(magic, 4);
  out.write(reinterpret_cast<const char*>(&version), 4);
  out.write(reinterpret_cast<const char*>(&timing_resolution), 8);
  out.write(reinterpret_cast<const char*>(&count), 8);
  for (const TimetagEvent& e : events) {
    const std::uint8_t channel = static_cast<std::uint8_t>(e.channel);
    const std::uint64_t ticks =
        static_cast<std::uint64_t>(std::llround(e.time_ps / timing_resolution));
    out.write(reinterpret_cast<const char*>(&channel), 1);
    out.write(reinterpret_cast<const char*>(&ticks), 8);
  }
  if (!out) throw FormatError("short write to " + path);
}

std::vector<TimetagEvent> read_timetags(const std::string& path) {
  std::ifstream in = open_in(path, std::ios::binary);
  char magic[4];
  std::uint32_t version = 0;
  double resolution = 0.0;
  std::uint64_t count = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&version), 4);
  in.read(reinterpret_cast<char*>(&resolution), 8);
  in.read(reinterpret_cast<char*>(&count), 8);
  if (!in || std::memcmp(magic, "BTTG", 4) != 0) {
    throw FormatError(path + ": not a timetag stream");
  }
  if (version != kTimetagVersion) {
    throw FormatError(path + ": unknown timetag version " +
                      std::to_string(version));
  }
  std::vector<TimetagEvent> events;
  events.reserve(count);
  for (std::uint64_t k = 0; k < count; ++k) {
    std::uint8_t channel = 0;
    std::uint64_t ticks = 0;
    in.read(reinterpret_cast<char*>(&channel), 1);
    in.read(reinterpret_cast<char*>(&ticks), 8);
    if (!in) throw FormatError(path + ": truncated record stream");
    events.push_back({static_cast<int>(channel),
                      static_cast<double>(ticks) * resolution});
  }
  return events;
}

void write_pgm(const std::string& path, const Eigen::MatrixXd& m,
               double percentile) {
  std::vector<double> values(m.data(), m.data() + m.size());
  const std::size_t k = std::min(
      values.size() - 1,
      static_cast<std::size_t>(percentile / 100.0 * values.size()));
  std::nth_element(values.begin(), values.begin() + static_cast<long>(k),
                   values.end());
  const double ceiling = std::max(values[k], 1e-300);

  std::ofstream out = open_out(path, std::ios::binary);
  out << "P5\n" << m.cols() << ' ' << m.rows() << "\n255\n";
  std::vector<unsigned char> row(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double scaled = std::clamp(m(i, j) / ceiling, 0.0, 1.0);
      row[static_cast<std::size_t>(j)] =
          static_cast<unsigned char>(std::lround(scaled * 255.0));
    }
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size()));
  }
}

// ---- JSON results -----------------------------------------------------

void write_schmidt_json(const std::string& path, const SchmidtDecomposition& d,
                        const std::string& modes1_file,
                        const std::string& modes2_file) {
  json doc;
  doc["version"] = 1;
  doc["coefficients"] = std::vector<double>(
      d.coefficients.data(), d.coefficients.data() + d.coefficients.size());
  doc["schmidt_number"] = schmidt_number(d);
  doc["mode_files"] = {{"modes1", modes1_file}, {"modes2", modes2_file}};
  write_bjsa_matrix(modes1_file, d.modes1, d.grid1.center_wavelength,
                    d.grid1.span, 0.0, static_cast<double>(d.modes1.cols()), 0);
  write_bjsa_matrix(modes2_file, d.modes2, d.grid2.center_wavelength,
                    d.grid2.span, 0.0, static_cast<double>(d.modes2.cols()), 0);
  open_out(path, std::ios::out) << doc.dump(2) << '\n';
}

void write_fit_json(const std::string& path, const FitResult& fit) {
  json doc;
  doc["version"] = 1;
  doc["params"] = {{"normalization", fit.params.normalization},
                   {"visibility", fit.params.visibility},
                   {"bin_separation", fit.params.bin_separation},
                   {"bin_sigma", fit.params.bin_sigma},
                   {"phase", fit.params.phase}};
  doc["standard_errors"] = {{"normalization", fit.standard_errors(0)},
                            {"visibility", fit.standard_errors(1)},
                            {"bin_separation", fit.standard_errors(2)},
                            {"bin_sigma", fit.standard_errors(3)},
                            {"phase", fit.standard_errors(4)}};
  std::vector<double> cov;
  cov.reserve(25);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) cov.push_back(fit.covariance(i, j));
  }
  doc["covariance"] = cov;
  doc["residual_sum"] = fit.residual_sum;
  doc["converged"] = fit.converged;
  doc["iterations"] = fit.iterations;
  open_out(path, std::ios::out) << doc.dump(2) << '\n';
}

FitResult read_fit_json(const std::string& path) {
  json doc;
  try {
    doc = json::parse(open_in(path, std::ios::in));
  } catch (const json::exception& e) {
    throw FormatError(path + ": " + e.what());
  }
  try {
    if (doc.at("version").get<int>() != 1) {
      throw FormatError(path + ": unknown fit.json version");
    }
    FitResult fit;
    const json& p = doc.at("params");
    fit.params.normalization = p.at("normalization").get<double>();
    fit.params.visibility = p.at("visibility").get<double>();
    fit.params.bin_separation = p.at("bin_separation").get<double>();
    fit.params.bin_sigma = p.at("bin_sigma").get<double>();
    fit.params.phase = p.at("phase").get<double>();
    const json& se = doc.at("standard_errors");
    fit.standard_errors << se.at("normalization").get<double>(),
        se.at("visibility").get<double>(), se.at("bin_separation").get<double>(),
        se.at("bin_sigma").get<double>(), se.at("phase").get<double>();
    const auto cov = doc.at("covariance").get<std::vector<double>>();
    if (cov.size() != 25) throw FormatError(path + ": covariance must hold 25 values");
    for (int i = 0; i < 5; ++i) {
      for (int j = 0; j < 5; ++j) fit.covariance(i, j) = cov[static_cast<std::size_t>(5 * i + j)];
    }
    fit.residual_sum = doc.at("residual_sum").get<double>();
    fit.converged = doc.at("converged").get<bool>();
    fit.iterations = doc.at("iterations").get<int>();
    return fit;
  } catch (const json::exception& e) {
    throw FormatError(path + ": " + e.what());
  }
}

void write_report_json(const std::string& path, const PhaseReport& report,
                       const KEstimate& k) {
  json doc;
  doc["version"] = 1;
  doc["fit_phi"] = report.fit_phi;
  doc["fit_phi_err"] = report.fit_phi_err;
  doc["detected_separation"] = report.detected_separation;
  doc["k_estimate"] = {{"mean", k.mean},
                       {"bound", k.bound},
                       {"rounds", k.rounds},
                       {"seed", k.seed}};
  doc["candidates"] = json::array();
  for (const CandidateReport& c : report.candidates) {
    doc["candidates"].push_back({{"phi", c.phi},
                                 {"imag_norm_fraction", c.imag_norm_fraction},
                                 {"hom_phase_residual", c.hom_phase_residual},
                                 {"selected", c.selected}});
  }
  doc["ambiguous"] = report.ambiguous();
  if (!report.ambiguous()) {
    doc["selected_phi"] = report.selected_phi();
  } else {
    doc["selected_phi"] = nullptr;
  }
  open_out(path, std::ios::out) << doc.dump(2) << '\n';
}

// ---- pipeline config ---------------------------------------------------

namespace {

std::size_t line_of_byte(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

template <typename T>
void read_field(const json& node, const char* key, T& target,
                const std::string& path) {
  if (!node.contains(key)) return;
  try {
    target = node.at(key).get<T>();
  } catch (const json::exception&) {
    throw FormatError("config error: " + path + "." + key +
                      ": wrong type or value");
  }
}

}  // namespace

FrequencyGrid PipelineConfig::make_frequency_grid() const {
  return make_grid(grid.center, grid.span, grid.n);
}

void PipelineConfig::validate() const {
  try {
    state.validate();
  } catch (const Error& e) {
    throw InvalidSpec("config error: " + std::string(e.what()));
  }
  if (!(grid.span > 0.0))
    throw InvalidSpec("config error: grid.span: must be > 0");
  if (grid.n < 2) throw InvalidSpec("config error: grid.n: must be >= 2");
  if (!(grid.center > grid.span / 2.0))
    throw InvalidSpec("config error: grid.center: must exceed grid.span/2");
  try {
    tofs.validate();
  } catch (const Error& e) {
    throw InvalidSpec("config error: tofs: " + std::string(e.what()));
  }
  if (!(hom.delay_min < hom.delay_max))
    throw InvalidSpec("config error: hom.delay_min: must be below hom.delay_max");
  if (hom.points < 10)
    throw InvalidSpec("config error: hom.points: must be >= 10");
  if (hom.phis.empty())
    throw InvalidSpec("config error: hom.phis: must not be empty");
  if (mc.rounds < 2)
    throw InvalidSpec("config error: mc.rounds: must be >= 2");
  if (output_dir.empty())
    throw InvalidSpec("config error: output_dir: must not be empty");
}

PipelineConfig load_pipeline_config(const std::string& path) {
  std::ifstream in = open_in(path, std::ios::in);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError("config error: " + path + " line " +
                      std::to_string(line_of_byte(text, e.byte)) + ": " +
                      e.what());
  }

  PipelineConfig cfg;
  if (doc.contains("state")) {
    const json& s = doc["state"];
    read_field(s, "bin_separation", cfg.state.bin_separation, "state");
    read_field(s, "bin_width", cfg.state.bin_width, "state");
    read_field(s, "phase_phi_p", cfg.state.phase_phi_p, "state");
    if (s.contains("pump")) {
      const json& p = s["pump"];
      read_field(p, "center_wavelength", cfg.state.pump.center_wavelength,
                 "state.pump");
      read_field(p, "pulse_duration_fwhm", cfg.state.pump.pulse_duration_fwhm,
                 "state.pump");
      read_field(p, "repetition_period", cfg.state.pump.repetition_period,
                 "state.pump");
      if (p.contains("shape")) {
        const std::string shape = p.at("shape").get<std::string>();
        if (shape == "SechSquared") {
          cfg.state.pump.shape = PumpShape::SechSquared;
        } else if (shape == "Gaussian") {
          cfg.state.pump.shape = PumpShape::Gaussian;
        } else {
          throw FormatError(
              "config error: state.pump.shape: expected SechSquared or "
              "Gaussian");
        }
      }
    }
    if (s.contains("pmf")) {
      const json& p = s["pmf"];
      read_field(p, "order", cfg.state.pmf.order, "state.pmf");
      read_field(p, "mismatch_offset", cfg.state.pmf.mismatch_offset,
                 "state.pmf");
      if (p.contains("width")) {
        read_field(p, "width", cfg.state.pmf.width, "state.pmf");
        cfg.state.pmf_width_explicit = true;
      }
    }
  }
  if (doc.contains("grid")) {
    const json& g = doc["grid"];
    read_field(g, "center", cfg.grid.center, "grid");
    read_field(g, "span", cfg.grid.span, "grid");
    read_field(g, "n", cfg.grid.n, "grid");
  }
  if (doc.contains("tofs")) {
    const json& t = doc["tofs"];
    read_field(t, "dispersion", cfg.tofs.dispersion, "tofs");
    read_field(t, "fiber_length", cfg.tofs.fiber_length, "tofs");
    read_field(t, "jitter_fwhm", cfg.tofs.jitter_fwhm, "tofs");
    read_field(t, "repetition_period", cfg.tofs.repetition_period, "tofs");
    read_field(t, "reference_wavelength", cfg.tofs.reference_wavelength,
               "tofs");
    read_field(t, "timing_resolution", cfg.tofs.timing_resolution, "tofs");
    read_field(t, "survival1", cfg.tofs.survival1, "tofs");
    read_field(t, "survival2", cfg.tofs.survival2, "tofs");
  }
  if (doc.contains("hom")) {
    const json& h = doc["hom"];
    read_field(h, "delay_min", cfg.hom.delay_min, "hom");
    read_field(h, "delay_max", cfg.hom.delay_max, "hom");
    read_field(h, "points", cfg.hom.points, "hom");
    read_field(h, "phis", cfg.hom.phis, "hom");
  }
  if (doc.contains("mc")) {
    const json& m = doc["mc"];
    read_field(m, "rounds", cfg.mc.rounds, "mc");
    read_field(m, "seed", cfg.mc.seed, "mc");
  }
  read_field(doc, "output_dir", cfg.output_dir, "");
  cfg.validate();
  return cfg;
}

}  // namespace bst
