#pragma once

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "bst/grid.hpp"
#include "bst/jsa.hpp"
#include "bst/units.hpp"

namespace bst_test {

// Regularized upper incomplete gamma Q(a, x) (series / continued
// fraction), used for chi-square p-values.
inline double gamma_q(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_q domain");
  if (x == 0.0) return 1.0;
  const double log_pre = a * std::log(x) - x - std::lgamma(a);
  if (x < a + 1.0) {
    // Lower series P(a, x); Q = 1 - P.
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < 500; ++n) {
      term *= x / (a + n);
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-15) break;
    }
    return 1.0 - sum * std::exp(log_pre);
  }
  // Lentz continued fraction for Q.
  double b = x + 1.0 - a;
  double c = 1e300;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < 1e-300) d = 1e-300;
    c = b + an / c;
    if (std::abs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-15) break;
  }
  return h * std::exp(log_pre);
}

/// p-value of a chi-square statistic with k degrees of freedom.
inline double chi2_pvalue(double statistic, int dof) {
  return gamma_q(dof / 2.0, statistic / 2.0);
}

/// Interpolated full width at half maximum; outermost crossings.
inline double fwhm(const Eigen::ArrayXd& axis, const Eigen::ArrayXd& values) {
  const double half = values.maxCoeff() / 2.0;
  int lo = -1, hi = -1;
  for (int i = 0; i < values.size(); ++i) {
    if (values(i) >= half) {
      if (lo < 0) lo = i;
      hi = i;
    }
  }
  if (lo <= 0 || hi >= values.size() - 1) {
    throw std::runtime_error("fwhm: half-max region touches the axis edge");
  }
  const auto cross = [&](int inside, int outside) {
    const double t = (half - values(outside)) / (values(inside) - values(outside));
    return axis(outside) + t * (axis(inside) - axis(outside));
  };
  return cross(hi, hi + 1) - cross(lo, lo - 1);
}

/// Haar-ish random unitary via QR of a complex Gaussian matrix.
inline Eigen::MatrixXcd random_unitary(int n, unsigned seed) {
  std::srand(seed);
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Random(n, n);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  return q;
}

/// Paper-nominal hyper-entangled state configuration (defaults).
inline bst::StateConfig paper_state() { return bst::StateConfig{}; }

/// Angular bin separation of an 11 nm split at 1550 nm.
inline double paper_delta() {
  return bst::angular_frequency(1544.5) - bst::angular_frequency(1555.5);
}

/// Angular bin half-width of a 3 nm bin at 1550 nm.
inline double paper_sigma() {
  return (bst::angular_frequency(1548.5) - bst::angular_frequency(1551.5)) / 2.0;
}

}  // namespace bst_test
