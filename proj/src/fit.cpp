#include "bst/fit.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "bst/errors.hpp"

namespace bst {

namespace {

constexpr int kMaxIterations = 500;
constexpr double kTransformCap = 60.0;

using Vec5 = Eigen::Matrix<double, 5, 1>;

struct Transform {
  FitBounds bounds;

  Vec5 to_internal(const HomFitParams& p) const {
    Vec5 t;
    t(0) = std::log(p.normalization);
    const auto& v = bounds.visibility;
    const double frac = std::clamp((p.visibility - v.lo) / (v.hi - v.lo),
                                   1e-12, 1.0 - 1e-12);
    t(1) = std::log(frac / (1.0 - frac));
    t(2) = std::log(p.bin_separation);
    t(3) = std::log(p.bin_sigma);
    t(4) = p.phase;
    return t.cwiseMax(-kTransformCap).cwiseMin(kTransformCap);
  }

  HomFitParams to_physical(const Vec5& raw) const {
    const Vec5 t = raw.cwiseMax(-kTransformCap).cwiseMin(kTransformCap);
    HomFitParams p;
    p.normalization = std::exp(t(0));
    const auto& v = bounds.visibility;
    p.visibility = v.lo + (v.hi - v.lo) / (1.0 + std::exp(-t(1)));
    p.bin_separation = std::exp(t(2));
    p.bin_sigma = std::exp(t(3));
    p.phase = t(4);
    return p;
  }

  bool inside(const HomFitParams& p) const {
    const auto in = [](double x, const FitBounds::Interval& iv) {
      return x >= iv.lo && x <= iv.hi;
    };
    return in(p.normalization, bounds.normalization) &&
           in(p.visibility, bounds.visibility) &&
           in(p.bin_separation, bounds.bin_separation) &&
           in(p.bin_sigma, bounds.bin_sigma) && in(p.phase, bounds.phase);
  }

  /// d(physical)/d(internal) at the fitted point.
  Vec5 jacobian_diag(const HomFitParams& p) const {
    Vec5 d;
    d(0) = p.normalization;
    const auto& v = bounds.visibility;
    d(1) = (p.visibility - v.lo) * (v.hi - p.visibility) / (v.hi - v.lo);
    d(2) = p.bin_separation;
    d(3) = p.bin_sigma;
    d(4) = 1.0;
    return d;
  }
};

/// Residual vector, or infinity cost when the model rejects the point.
bool residuals(const HomCurve& data, const HomFitParams& p,
               Eigen::VectorXd& out) {
  try {
    for (Eigen::Index i = 0; i < data.delays.size(); ++i) {
      out(i) = pcc_analytic(p, data.delays(i)) - data.values(i);
    }
  } catch (const NonRealResult&) {
    return false;
  }
  return out.allFinite();
}

}  // namespace

FitResult fit_interferogram(const HomCurve& data, const HomFitParams& init,
                            const FitBounds& bounds) {
  data.validate();
  if (data.delays.size() < 10) {
    throw InvalidSpec("fit needs at least 10 data points");
  }
  const Transform tf{bounds};
  if (!tf.inside(init)) {
    throw InvalidSpec("fit initialization lies outside the bounds");
  }

  const Eigen::Index m = data.delays.size();
  Vec5 t = tf.to_internal(init);
  Eigen::VectorXd r(m), r_trial(m);
  if (!residuals(data, tf.to_physical(t), r)) {
    throw SingularJacobian("model not evaluable at the initial point");
  }
  double cost = r.squaredNorm();

  Eigen::MatrixXd jac(m, 5);
  Eigen::VectorXd probe(m);
  double damping = 1e-3;
  bool converged = false;
  int iter = 0;

  for (; iter < kMaxIterations; ++iter) {
    for (int k = 0; k < 5; ++k) {
      const double h = 1e-6 * std::max(1.0, std::abs(t(k)));
      Vec5 tp = t, tm = t;
      tp(k) += h;
      tm(k) -= h;
      Eigen::VectorXd fp(m), fm(m);
      const bool okp = residuals(data, tf.to_physical(tp), fp);
      const bool okm = residuals(data, tf.to_physical(tm), fm);
      if (okp && okm) {
        jac.col(k) = (fp - fm) / (2.0 * h);
      } else if (okp) {
        jac.col(k) = (fp - r) / h;
      } else if (okm) {
        jac.col(k) = (r - fm) / h;
      } else {
        throw SingularJacobian("model not evaluable near the current point");
      }
    }
    if (!jac.allFinite()) {
      throw SingularJacobian("non-finite Jacobian");
    }
    const Eigen::Matrix<double, 5, 5> normal = jac.transpose() * jac;
    const Vec5 gradient = jac.transpose() * r;

    bool stepped = false;
    Vec5 step = Vec5::Zero();
    for (int attempt = 0; attempt < 40; ++attempt) {
      Eigen::Matrix<double, 5, 5> damped = normal;
      damped.diagonal() += damping * (normal.diagonal().array() + 1e-12).matrix();
      step = damped.ldlt().solve(-gradient);
      if (!step.allFinite()) {
        damping *= 4.0;
        continue;
      }
      const Vec5 t_trial =
          (t + step).cwiseMax(-kTransformCap).cwiseMin(kTransformCap);
      const HomFitParams trial = tf.to_physical(t_trial);
      if (tf.inside(trial) && residuals(data, trial, r_trial)) {
        const double trial_cost = r_trial.squaredNorm();
        if (trial_cost < cost) {
          const double drop = cost - trial_cost;
          t = t_trial;
          r.swap(r_trial);
          cost = trial_cost;
          damping = std::max(damping / 3.0, 1e-14);
          stepped = true;
          if (step.lpNorm<Eigen::Infinity>() < 1e-11 ||
              drop <= 1e-13 * std::max(cost, 1.0)) {
            converged = true;
          }
          break;
        }
      }
      damping *= 4.0;
    }
    if (!stepped) {
      // Damping exhausted: no descent direction left at this resolution.
      converged = true;
    }
    if (converged) {
      ++iter;
      break;
    }
  }

  // Covariance from the quadratic model at the solution, mapped back to
  // physical coordinates. Pseudo-inverse keeps parameters pinned at a
  // bound (zero sensitivity) from poisoning the rest.
  for (int k = 0; k < 5; ++k) {
    const double h = 1e-6 * std::max(1.0, std::abs(t(k)));
    Vec5 tp = t, tm = t;
    tp(k) += h;
    tm(k) -= h;
    Eigen::VectorXd fp(m), fm(m);
    if (residuals(data, tf.to_physical(tp), fp) &&
        residuals(data, tf.to_physical(tm), fm)) {
      jac.col(k) = (fp - fm) / (2.0 * h);
    }
  }
  const Eigen::Matrix<double, 5, 5> normal = jac.transpose() * jac;
  const double dof = static_cast<double>(std::max<Eigen::Index>(m - 5, 1));
  const double variance = cost / dof;
  Eigen::JacobiSVD<Eigen::Matrix<double, 5, 5>> svd(
      normal, Eigen::ComputeFullU | Eigen::ComputeFullV);
  svd.setThreshold(1e-12);
  const Eigen::Matrix<double, 5, 5> cov_internal =
      svd.solve(Eigen::Matrix<double, 5, 5>::Identity()) * variance;

  FitResult result;
  result.params = tf.to_physical(t);
  const Vec5 d = tf.jacobian_diag(result.params);
  result.covariance = d.asDiagonal() * cov_internal * d.asDiagonal();
  result.covariance = 0.5 * (result.covariance + result.covariance.transpose()).eval();
  result.standard_errors = result.covariance.diagonal().cwiseMax(0.0).cwiseSqrt();
  result.residual_sum = cost;
  result.converged = converged;
  result.iterations = iter;
  result.params.phase = wrap_two_pi(result.params.phase);
  return result;
}

HomFitParams default_init(const HomCurve& data) {
  data.validate();
  const Eigen::Index m = data.values.size();
  const Eigen::Index wing = std::max<Eigen::Index>(m / 10, 1);
  double baseline = 0.0;
  for (Eigen::Index i = 0; i < wing; ++i) {
    baseline += data.values(i) + data.values(m - 1 - i);
  }
  baseline /= static_cast<double>(2 * wing);

  HomFitParams init;
  init.normalization = std::max(2.0 * baseline, 1e-6);
  init.visibility = 0.9;
  const std::vector<double> peaks = spectral_peak_candidates(data, 1);
  init.bin_separation = peaks.empty() ? 1.0 : peaks.front();

  const Eigen::ArrayXd centered = data.values - data.values.mean();
  const Eigen::ArrayXd weight = centered.abs();
  const double wsum = weight.sum();
  if (wsum > 0.0) {
    const double m2 = (weight * data.delays.square()).sum() / wsum;
    init.bin_sigma = m2 > 0.0 ? std::sqrt(2.0 / m2) : 1.0;
  } else {
    init.bin_sigma = 1.0;
  }
  init.phase = 0.0;
  return init;
}

std::vector<double> spectral_peak_candidates(const HomCurve& data,
                                             int max_candidates) {
  const Eigen::ArrayXd centered = data.values - data.values.mean();
  const double range = data.delays(data.delays.size() - 1) - data.delays(0);
  double min_spacing = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i + 1 < data.delays.size(); ++i) {
    min_spacing = std::min(min_spacing, data.delays(i + 1) - data.delays(i));
  }
  const double f_lo = 2.0 * std::numbers::pi / range;
  const double f_hi = std::numbers::pi / min_spacing;
  const int n_freq = 1200;

  Eigen::ArrayXd amplitude(n_freq);
  Eigen::ArrayXd freqs = Eigen::ArrayXd::LinSpaced(n_freq, f_lo, f_hi);
  for (int k = 0; k < n_freq; ++k) {
    std::complex<double> acc = 0.0;
    for (Eigen::Index i = 0; i < data.delays.size(); ++i) {
      acc += centered(i) * std::polar(1.0, -freqs(k) * data.delays(i));
    }
    amplitude(k) = std::abs(acc);
  }

  std::vector<std::pair<double, double>> peaks;  // (amplitude, frequency)
  for (int k = 1; k + 1 < n_freq; ++k) {
    if (amplitude(k) >= amplitude(k - 1) && amplitude(k) >= amplitude(k + 1)) {
      peaks.emplace_back(amplitude(k), freqs(k));
    }
  }
  std::sort(peaks.rbegin(), peaks.rend());
  std::vector<double> out;
  for (const auto& [a, f] : peaks) {
    if (static_cast<int>(out.size()) >= max_candidates) break;
    out.push_back(f);
  }
  return out;
}

FitResult fit_interferogram_auto(const HomCurve& data, const FitBounds& bounds) {
  const HomFitParams base = default_init(data);
  std::vector<double> separations = spectral_peak_candidates(data, 2);
  if (separations.empty()) separations.push_back(base.bin_separation);

  const double phases[] = {0.0, std::numbers::pi / 2.0, std::numbers::pi,
                           1.5 * std::numbers::pi};
  const double widths[] = {base.bin_sigma, 2.0 * base.bin_sigma};

  FitResult best;
  bool have_best = false;
  for (double separation : separations) {
    for (double width : widths) {
      for (double phase : phases) {
        HomFitParams init = base;
        init.bin_separation = std::clamp(separation, bounds.bin_separation.lo,
                                         bounds.bin_separation.hi);
        init.bin_sigma =
            std::clamp(width, bounds.bin_sigma.lo, bounds.bin_sigma.hi);
        init.phase = phase;
        init.normalization =
            std::clamp(init.normalization, bounds.normalization.lo,
                       bounds.normalization.hi);
        FitResult candidate = fit_interferogram(data, init, bounds);
        if (!have_best || candidate.residual_sum < best.residual_sum) {
          best = candidate;
          have_best = true;
        }
      }
    }
  }
  return best;
}

}  // namespace bst
