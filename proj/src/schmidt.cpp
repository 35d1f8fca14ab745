#include "bst/schmidt.hpp"

#include <cmath>
#include <complex>

#include <Eigen/SVD>

#include "bst/errors.hpp"

namespace bst {

namespace {

constexpr double kCoefficientFloor = 1e-12;  // relative to lambda_1

Eigen::VectorXd normalize_lambdas(Eigen::VectorXd lambdas) {
  const double total = lambdas.sum();
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw DecompositionFailure("singular spectrum has zero or invalid mass");
  }
  lambdas /= total;
  return lambdas;
}

int truncated_count(const Eigen::VectorXd& lambdas) {
  int n = 0;
  const double floor = lambdas(0) * kCoefficientFloor;
  while (n < lambdas.size() && lambdas(n) > floor) ++n;
  return std::max(n, 1);
}

}  // namespace

Eigen::VectorXd schmidt_coefficients(const Eigen::MatrixXd& weighted) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(weighted);
  if (svd.info() != Eigen::Success) {
    throw DecompositionFailure("SVD did not converge");
  }
  Eigen::VectorXd lambdas = svd.singularValues().array().square();
  lambdas = normalize_lambdas(std::move(lambdas));
  return lambdas.head(truncated_count(lambdas));
}

Eigen::VectorXd schmidt_coefficients(const Eigen::MatrixXcd& weighted) {
  if (weighted.imag().isZero(0.0)) {
    return schmidt_coefficients(Eigen::MatrixXd(weighted.real()));
  }
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(weighted);
  if (svd.info() != Eigen::Success) {
    throw DecompositionFailure("SVD did not converge");
  }
  Eigen::VectorXd lambdas = svd.singularValues().array().square();
  lambdas = normalize_lambdas(std::move(lambdas));
  return lambdas.head(truncated_count(lambdas));
}

SchmidtDecomposition decompose(const JsaMatrix& jsa) {
  if (!jsa.normalized || std::abs(jsa.squared_norm() - 1.0) > 1e-6) {
    throw NotNormalized("Schmidt decomposition needs a normalized JSA");
  }
  // Absorb the grid measure so coefficients are discretization independent.
  const double root_measure = std::sqrt(jsa.measure());
  Eigen::MatrixXcd weighted = jsa.amplitudes * root_measure;

  Eigen::BDCSVD<Eigen::MatrixXcd> svd(weighted,
                                      Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) {
    throw DecompositionFailure("SVD did not converge");
  }

  Eigen::VectorXd lambdas =
      normalize_lambdas(svd.singularValues().array().square());
  const int rank = truncated_count(lambdas);

  SchmidtDecomposition d;
  d.grid1 = jsa.grid1;
  d.grid2 = jsa.grid2;
  d.coefficients = lambdas.head(rank);
  d.modes1 = svd.matrixU().leftCols(rank) / std::sqrt(jsa.grid1.step);
  d.modes2 = svd.matrixV().leftCols(rank).conjugate() / std::sqrt(jsa.grid2.step);

  // Phase convention: first significant component of each g_i real positive.
  for (int k = 0; k < rank; ++k) {
    const double colmax = d.modes1.col(k).cwiseAbs().maxCoeff();
    int lead = 0;
    while (lead < d.modes1.rows() - 1 &&
           std::abs(d.modes1(lead, k)) <= 1e-12 * colmax) {
      ++lead;
    }
    const std::complex<double> v = d.modes1(lead, k);
    if (std::abs(v) > 0.0) {
      const std::complex<double> rot = std::conj(v) / std::abs(v);
      d.modes1.col(k) *= rot;
      d.modes2.col(k) *= std::conj(rot);
    }
  }
  return d;
}

double schmidt_number(const Eigen::VectorXd& coefficients) {
  const double total = coefficients.sum();
  const double sq = (coefficients / total).squaredNorm();
  return 1.0 / sq;
}

double schmidt_number(const SchmidtDecomposition& d) {
  return schmidt_number(d.coefficients);
}

JsaMatrix reconstruct(const SchmidtDecomposition& d, int rank,
                      bool renormalize) {
  if (rank < 1 || rank > d.coefficients.size()) {
    throw RankOutOfRange("reconstruction rank outside available modes");
  }
  JsaMatrix out;
  out.grid1 = d.grid1;
  out.grid2 = d.grid2;
  out.amplitudes = d.modes1.leftCols(rank) *
                   d.coefficients.head(rank).cwiseSqrt().asDiagonal() *
                   d.modes2.leftCols(rank).transpose();
  out.normalized = false;
  if (renormalize) {
    const double sq = out.squared_norm();
    if (!(sq > 0.0)) throw ZeroNorm("reconstruction has zero norm");
    out.amplitudes /= std::sqrt(sq);
    out.normalized = true;
  }
  return out;
}

}  // namespace bst
