#include "fcblab/linalg.hpp"

#include <cmath>

namespace fcblab {

double largest_singular_value(const Eigen::MatrixXd& a) {
  if (a.size() == 0) return 0.0;
  if (a.rows() <= kFullSvdLimit && a.cols() <= kFullSvdLimit) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(a);
    return svd.singularValues()(0);
  }
  Eigen::VectorXd x = Eigen::VectorXd::Ones(a.cols()).normalized();
  double lambda = 0.0;
  for (int it = 0; it < kPowerIterations; ++it) {
    Eigen::VectorXd y = a.transpose() * (a * x);
    lambda = x.dot(y);
    const double norm = y.norm();
    if (norm == 0.0) return 0.0;
    x = y / norm;
  }
  return std::sqrt(std::max(lambda, 0.0));
}

Eigen::MatrixXd project_psd(const Eigen::MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
  const Eigen::VectorXd clamped = eig.eigenvalues().cwiseMax(0.0);
  return eig.eigenvectors() * clamped.asDiagonal() * eig.eigenvectors().transpose();
}

double min_eigenvalue(const Eigen::MatrixXd& symmetric) {
  if (symmetric.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(symmetric, Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(0);
}

}  // namespace fcblab
