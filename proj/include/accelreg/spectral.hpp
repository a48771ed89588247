#pragma once

// Dense symmetric eigendecomposition and functions of symmetric positive
// semidefinite matrices. Serves as the exact oracle for the iterative solvers.

#include <span>

#include <Eigen/Dense>

#include "accelreg/filters.hpp"

namespace accelreg::spectral {

struct EigenDecomposition {
  // Sorted descending.
  Eigen::VectorXd eigenvalues;
  // Orthonormal columns in the order of `eigenvalues`.
  Eigen::MatrixXd eigenvectors;
};

// Cyclic Jacobi eigensolver. Throws DomainError when the input is not
// symmetric to 1e-12 relative, NumericError when 100 sweeps do not reduce the
// off-diagonal Frobenius norm below 1e-12 of the total.
EigenDecomposition sym_eig(const Eigen::MatrixXd& a);

// Sets negative eigenvalues to zero and returns the smallest eigenvalue seen
// before clipping. A minimum below -1e-8 * max|eigenvalue| is reported on
// std::clog since it means the input was not PSD beyond roundoff.
double clip_nonnegative(EigenDecomposition& eig);

// U diag(g_t(lambda_i)) U^T v. Eigenvalues must lie in [0, kappa2] of the
// method (tiny negative roundoff is treated as zero).
Eigen::VectorXd apply_filter(const filters::FilterMethod& method, int t,
                             const EigenDecomposition& eig,
                             const Eigen::VectorXd& v);

// U diag(lambda_i^r) U^T v with 0^0 = 1.
Eigen::VectorXd matrix_power_apply(const EigenDecomposition& eig, double r,
                                   const Eigen::VectorXd& v);

// sum_i s_i / (s_i + lambda).
double effective_dimension(std::span<const double> eigenvalues, double lambda);

}  // namespace accelreg::spectral
