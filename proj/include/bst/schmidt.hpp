#pragma once

#include <Eigen/Core>

#include "bst/jsa.hpp"

namespace bst {

/// Schmidt decomposition f = sum_i sqrt(lambda_i) g_i(w1) h_i(w2).
/// Coefficients are descending and sum to 1; mode columns are orthonormal
/// under the grid measure (<g_i, g_j> * step = delta_ij).
struct SchmidtDecomposition {
  Eigen::VectorXd coefficients;
  Eigen::MatrixXcd modes1;  // columns g_i on grid1
  Eigen::MatrixXcd modes2;  // columns h_i on grid2
  FrequencyGrid grid1;
  FrequencyGrid grid2;
};

SchmidtDecomposition decompose(const JsaMatrix& jsa);

/// K = 1 / sum lambda_i^2, the effective number of entangled modes.
double schmidt_number(const SchmidtDecomposition& d);
double schmidt_number(const Eigen::VectorXd& coefficients);

/// Truncated reconstruction from the leading `rank` modes. The result is
/// left unnormalized unless `renormalize` is set, so the residual norm
/// equals the discarded coefficient mass.
JsaMatrix reconstruct(const SchmidtDecomposition& d, int rank,
                      bool renormalize = false);

/// Normalized Schmidt coefficients of a measure-weighted amplitude matrix
/// (singular values squared). The real overload avoids the complex SVD
/// when amplitudes carry no imaginary part.
Eigen::VectorXd schmidt_coefficients(const Eigen::MatrixXcd& weighted);
Eigen::VectorXd schmidt_coefficients(const Eigen::MatrixXd& weighted);

}  // namespace bst
