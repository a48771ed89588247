#pragma once

#include <random>

#include <Eigen/Dense>

namespace accelreg::testutil {

inline Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  return m;
}

inline Eigen::VectorXd gaussian_vector(Eigen::Index n, std::mt19937_64& rng) {
  return gaussian_matrix(n, 1, rng).col(0);
}

inline Eigen::MatrixXd random_symmetric(Eigen::Index n, std::mt19937_64& rng) {
  const Eigen::MatrixXd g = gaussian_matrix(n, n, rng);
  return 0.5 * (g + g.transpose());
}

inline Eigen::MatrixXd random_orthogonal(Eigen::Index n, std::mt19937_64& rng) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian_matrix(n, n, rng));
  return qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
}

// PSD matrix of the given rank scaled so that its largest eigenvalue is `top`.
inline Eigen::MatrixXd random_psd(Eigen::Index n, std::mt19937_64& rng, double top = 1.0,
                                  Eigen::Index rank = -1) {
  if (rank < 0) rank = n;
  const Eigen::MatrixXd x = gaussian_matrix(n, rank, rng);
  Eigen::MatrixXd m = x * x.transpose();
  m = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return m * (top / es.eigenvalues().maxCoeff());
}

}  // namespace accelreg::testutil
