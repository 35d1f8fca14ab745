#include "bst/hom.hpp"

#include <cmath>
#include <complex>

#include "bst/errors.hpp"

namespace bst {

void HomFitParams::validate() const {
  if (!(normalization > 0.0)) throw InvalidSpec("hom.normalization: must be > 0");
  if (!(bin_sigma > 0.0)) throw InvalidSpec("hom.bin_sigma: must be > 0");
  if (bin_separation < 0.0) throw InvalidSpec("hom.bin_separation: must be >= 0");
  if (visibility < 0.0 || visibility > 1.0)
    throw InvalidSpec("hom.visibility: must lie in [0, 1]");
}

void HomCurve::validate() const {
  if (delays.size() != values.size())
    throw InvalidSpec("hom curve: delays and values differ in length");
  for (Eigen::Index i = 0; i + 1 < delays.size(); ++i) {
    if (!(delays(i) < delays(i + 1)))
      throw InvalidSpec("hom curve: delays must be strictly increasing");
  }
  if (!values.isFinite().all() || (values < 0.0).any())
    throw InvalidSpec("hom curve: values must be finite and nonnegative");
}

double pcc_analytic(const HomFitParams& p, double tau) {
  using namespace std::complex_literals;
  const double d = p.bin_separation;
  const double s = p.bin_sigma;
  const double s2 = s * s;
  // The published expression carries exp(delta^2/sigma^2) in both the
  // numerator and denominator; dividing it through keeps every
  // intermediate finite for well-separated bins.
  const double damp = std::exp(-d * d / s2);
  const std::complex<double> osc = std::exp(1i * (d * tau + p.phase));
  const std::complex<double> numerator =
      (1.0 + osc * osc) * s2 * (s2 * tau * tau - 2.0) +
      2.0 * osc * damp * (4.0 * d * d - 2.0 * s2 + s2 * s2 * tau * tau);
  const double denominator =
      s2 - damp * (2.0 * d * d * std::cos(p.phase) -
                   s2 * std::cos(p.phase) * std::cos(p.phase));
  const std::complex<double> value =
      p.normalization *
      (0.5 - p.visibility / 8.0 *
                 std::exp(-1i * d * tau - s2 * tau * tau / 4.0 - 1i * p.phase) *
                 numerator / denominator);
  if (!(std::abs(value.imag()) < 1e-9 * p.normalization) ||
      !std::isfinite(value.real())) {
    throw NonRealResult("analytic HOM model left the real axis");
  }
  return value.real();
}

HomCurve hom_from_jsa(const JsaMatrix& jsa, const Eigen::ArrayXd& delays) {
  if (!jsa.grid1.same_axis(jsa.grid2)) {
    throw NonSquareGrid("HOM overlap needs a shared square grid");
  }
  const Eigen::MatrixXcd overlap =
      jsa.amplitudes.cwiseProduct(jsa.amplitudes.transpose().conjugate());
  const Eigen::ArrayXd& axis = jsa.grid1.axis;
  const double measure = jsa.measure();

  HomCurve curve;
  curve.delays = delays;
  curve.values.resize(delays.size());
  curve.kind = HomCurve::Kind::Probability;
  Eigen::VectorXcd left(axis.size()), right(axis.size());
  for (Eigen::Index t = 0; t < delays.size(); ++t) {
    const double tau = delays(t);
    for (Eigen::Index k = 0; k < axis.size(); ++k) {
      left(k) = std::polar(1.0, -axis(k) * tau);
      right(k) = std::polar(1.0, axis(k) * tau);
    }
    // Bilinear form without conjugation (dot() would conjugate left).
    const std::complex<double> integral =
        (left.transpose() * (overlap * right)).value() * measure;
    curve.values(t) = 0.5 * (1.0 - integral.real());
  }
  return curve;
}

std::pair<HomCurve, HomCurve> confidence_band(const HomFitParams& model,
                                              const Eigen::ArrayXd& delays,
                                              long long total_counts,
                                              double k_sigma) {
  if (total_counts <= 0) throw InvalidSpec("confidence band: total_counts must be > 0");
  if (k_sigma < 0.0) throw InvalidSpec("confidence band: k_sigma must be >= 0");
  Eigen::ArrayXd values(delays.size());
  for (Eigen::Index i = 0; i < delays.size(); ++i) {
    values(i) = pcc_analytic(model, delays(i));
  }
  const double scale = static_cast<double>(total_counts) / values.sum();
  HomCurve lower{delays, values, HomCurve::Kind::Probability};
  HomCurve upper = lower;
  for (Eigen::Index i = 0; i < delays.size(); ++i) {
    const double expected = values(i) * scale;
    const double half = k_sigma * std::sqrt(std::max(expected, 0.0)) / scale;
    lower.values(i) = values(i) - half;
    upper.values(i) = values(i) + half;
  }
  return {lower, upper};
}

}  // namespace bst
