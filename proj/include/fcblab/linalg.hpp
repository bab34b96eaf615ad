#pragma once

#include <Eigen/Dense>

namespace fcblab {

// Dimension up to which singular values come from a full SVD.
inline constexpr Eigen::Index kFullSvdLimit = 512;
inline constexpr int kPowerIterations = 50;

// Largest singular value: full SVD for small matrices, otherwise power
// iteration on A^T A from the normalised all-ones vector.
double largest_singular_value(const Eigen::MatrixXd& a);

// Nearest positive semidefinite matrix in Frobenius norm.
Eigen::MatrixXd project_psd(const Eigen::MatrixXd& a);

double min_eigenvalue(const Eigen::MatrixXd& symmetric);

}  // namespace fcblab
