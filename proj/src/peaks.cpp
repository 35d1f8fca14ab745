#include "bst/peaks.hpp"

#include <algorithm>
#include <cmath>

namespace bst {

std::vector<Peak> find_local_maxima(const Eigen::MatrixXd& m,
                                    double threshold_frac) {
  std::vector<Peak> peaks;
  if (m.rows() < 3 || m.cols() < 3) return peaks;
  const double threshold = m.maxCoeff() * threshold_frac;
  for (int i = 1; i < m.rows() - 1; ++i) {
    for (int j = 1; j < m.cols() - 1; ++j) {
      const double v = m(i, j);
      if (v < threshold) continue;
      bool is_max = true;
      for (int di = -1; di <= 1 && is_max; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          const double nb = m(i + di, j + dj);
          // Ties resolve toward the earlier cell in row-major order.
          const bool earlier = di < 0 || (di == 0 && dj < 0);
          if (nb > v || (nb == v && earlier)) {
            is_max = false;
            break;
          }
        }
      }
      if (is_max) peaks.push_back({i, j, v});
    }
  }
  return peaks;
}

std::vector<Lobe> detect_lobes(const Eigen::MatrixXd& m,
                               const Eigen::ArrayXd& axis1_nm,
                               const Eigen::ArrayXd& axis2_nm,
                               double threshold_frac, double nms_radius_nm) {
  std::vector<Peak> peaks = find_local_maxima(m, threshold_frac);
  std::sort(peaks.begin(), peaks.end(),
            [](const Peak& a, const Peak& b) { return a.value > b.value; });
  std::vector<Lobe> kept;
  const double r2 = nms_radius_nm * nms_radius_nm;
  for (const Peak& p : peaks) {
    const double l1 = axis1_nm(p.i);
    const double l2 = axis2_nm(p.j);
    bool suppressed = false;
    for (const Lobe& k : kept) {
      const double d1 = l1 - k.lambda1;
      const double d2 = l2 - k.lambda2;
      if (d1 * d1 + d2 * d2 < r2) {
        suppressed = true;
        break;
      }
    }
    if (!suppressed) kept.push_back({l1, l2, p.value, p.i, p.j});
  }
  return kept;
}

}  // namespace bst
