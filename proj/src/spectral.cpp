#include "accelreg/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <sstream>
#include <vector>

#include <Eigen/Jacobi>

#include "accelreg/errors.hpp"

namespace accelreg::spectral {

namespace {

constexpr int kSweepCap = 100;
constexpr double kOffDiagonalTol = 1e-12;

double off_diagonal_norm2(const Eigen::MatrixXd& a) {
  double sum = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (i != j) sum += a(i, j) * a(i, j);
  return sum;
}

// Eigenvalues below this are treated as roundoff around zero.
double zero_tolerance(const EigenDecomposition& eig) {
  const double top = eig.eigenvalues.size() ? eig.eigenvalues.cwiseAbs().maxCoeff() : 0.0;
  return 1e-8 * std::max(top, 1e-300);
}

}  // namespace

EigenDecomposition sym_eig(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw DomainError("sym_eig: matrix must be square");
  const Eigen::Index n = a.rows();
  const double scale = n ? a.cwiseAbs().maxCoeff() : 0.0;
  if (!std::isfinite(scale)) throw DomainError("sym_eig: non-finite matrix entry");
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw DomainError("sym_eig: matrix is not symmetric");

  Eigen::MatrixXd work = 0.5 * (a + a.transpose());
  Eigen::MatrixXd vectors = Eigen::MatrixXd::Identity(n, n);
  const double total = work.squaredNorm();
  const double target = kOffDiagonalTol * kOffDiagonalTol * total;

  int sweep = 0;
  double off = off_diagonal_norm2(work);
  while (off > target) {
    if (sweep == kSweepCap) {
      std::ostringstream msg;
      msg << "sym_eig: no convergence after " << kSweepCap
          << " sweeps, off-diagonal norm " << std::sqrt(off);
      throw NumericError(msg.str());
    }
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (work(p, q) == 0.0) continue;
        Eigen::JacobiRotation<double> rot;
        rot.makeJacobi(work, p, q);
        work.applyOnTheLeft(p, q, rot.adjoint());
        work.applyOnTheRight(p, q, rot);
        vectors.applyOnTheRight(p, q, rot);
        work(p, q) = work(q, p) = 0.0;
      }
    }
    ++sweep;
    off = off_diagonal_norm2(work);
  }

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return work(i, i) > work(j, j); });
  EigenDecomposition eig;
  eig.eigenvalues.resize(n);
  eig.eigenvectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    eig.eigenvalues(k) = work(order[k], order[k]);
    eig.eigenvectors.col(k) = vectors.col(order[k]);
  }
  return eig;
}

double clip_nonnegative(EigenDecomposition& eig) {
  if (eig.eigenvalues.size() == 0) return 0.0;
  const double min_before = eig.eigenvalues.minCoeff();
  if (min_before < -zero_tolerance(eig))
    std::clog << "warning: clipping eigenvalue " << min_before
              << " of a matrix expected to be PSD\n";
  eig.eigenvalues = eig.eigenvalues.cwiseMax(0.0);
  return min_before;
}

Eigen::VectorXd apply_filter(const filters::FilterMethod& method, int t,
                             const EigenDecomposition& eig,
                             const Eigen::VectorXd& v) {
  if (v.size() != eig.eigenvectors.rows())
    throw DomainError("apply_filter: vector length does not match the decomposition");
  if (t < 0 || t > filters::kMaxIterations)
    throw DomainError("apply_filter: iteration index out of range");
  const double slack = zero_tolerance(eig);
  std::vector<double> sigma(eig.eigenvalues.size());
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
    const double s = eig.eigenvalues(i);
    if (s > method.kappa2() * (1.0 + 1e-10)) {
      std::ostringstream msg;
      msg << "apply_filter: eigenvalue " << s << " exceeds kappa2=" << method.kappa2()
          << "; re-estimate kappa2 as an upper bound on the operator norm";
      throw DomainError(msg.str());
    }
    if (s < -slack) throw DomainError("apply_filter: operator is not positive semidefinite");
    sigma[i] = std::max(s, 0.0);
  }
  filters::FilterRecurrence rec(method, sigma);
  rec.advance_to(t);
  const Eigen::Map<const Eigen::VectorXd> g(rec.g().data(), static_cast<Eigen::Index>(rec.g().size()));
  return eig.eigenvectors * (g.asDiagonal() * (eig.eigenvectors.transpose() * v));
}

Eigen::VectorXd matrix_power_apply(const EigenDecomposition& eig, double r,
                                   const Eigen::VectorXd& v) {
  if (v.size() != eig.eigenvectors.rows())
    throw DomainError("matrix_power_apply: vector length does not match the decomposition");
  const double slack = std::max(1e-12, 1e-12 * (eig.eigenvalues.size() ? eig.eigenvalues.cwiseAbs().maxCoeff() : 0.0));
  Eigen::VectorXd powers(eig.eigenvalues.size());
  for (Eigen::Index i = 0; i < powers.size(); ++i) {
    const double s = eig.eigenvalues(i);
    if (s < -slack) throw DomainError("matrix_power_apply: negative eigenvalue");
    const double clipped = std::max(s, 0.0);
    if (r == 0.0) {
      powers(i) = 1.0;
    } else if (clipped == 0.0) {
      if (r < 0.0) throw DomainError("matrix_power_apply: negative power of a singular matrix");
      powers(i) = 0.0;
    } else {
      powers(i) = std::pow(clipped, r);
    }
  }
  return eig.eigenvectors * (powers.asDiagonal() * (eig.eigenvectors.transpose() * v));
}

double effective_dimension(std::span<const double> eigenvalues, double lambda) {
  if (!(lambda > 0.0)) throw DomainError("effective_dimension: lambda must be > 0");
  double sum = 0.0;
  for (double s : eigenvalues) {
    if (s < 0.0) throw DomainError("effective_dimension: eigenvalues must be >= 0");
    sum += s / (s + lambda);
  }
  return sum;
}

}  // namespace accelreg::spectral
