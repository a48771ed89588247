#include "accelreg/spectral.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "accelreg/errors.hpp"
#include "test_util.hpp"

using namespace accelreg;
using namespace accelreg::spectral;
using accelreg::filters::FilterMethod;

namespace {

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

void expect_valid_decomposition(const Eigen::MatrixXd& a, const EigenDecomposition& eig) {
  const auto& u = eig.eigenvectors;
  const Eigen::MatrixXd recon = u * eig.eigenvalues.asDiagonal() * u.transpose();
  EXPECT_LE(max_abs(a - recon), 1e-10 * max_abs(a));
  EXPECT_LE(max_abs(u.transpose() * u - Eigen::MatrixXd::Identity(a.rows(), a.rows())), 1e-10);
  for (Eigen::Index i = 1; i < eig.eigenvalues.size(); ++i)
    EXPECT_GE(eig.eigenvalues(i - 1), eig.eigenvalues(i));
}

}  // namespace

TEST(SymEig, DiagonalInput) {
  Eigen::MatrixXd a = Eigen::Vector3d(3, 1, 2).asDiagonal();
  const auto eig = sym_eig(a);
  EXPECT_EQ(eig.eigenvalues, Eigen::Vector3d(3, 2, 1));
  Eigen::MatrixXd perm(3, 3);
  perm << 1, 0, 0, 0, 0, 1, 0, 1, 0;
  EXPECT_EQ(eig.eigenvectors.cwiseAbs(), perm);
}

TEST(SymEig, TwoByTwo) {
  Eigen::MatrixXd a(2, 2);
  a << 2, 1, 1, 2;
  const auto eig = sym_eig(a);
  EXPECT_NEAR(eig.eigenvalues(0), 3.0, 1e-14);
  EXPECT_NEAR(eig.eigenvalues(1), 1.0, 1e-14);
  expect_valid_decomposition(a, eig);
}

TEST(SymEig, RandomSymmetricAgainstLibrarySolver) {
  std::mt19937_64 rng(7);
  const Eigen::MatrixXd a = testutil::random_symmetric(50, rng);
  const auto eig = sym_eig(a);
  expect_valid_decomposition(a, eig);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> oracle(a, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ascending = oracle.eigenvalues();
  for (Eigen::Index i = 0; i < 50; ++i)
    EXPECT_NEAR(eig.eigenvalues(i), ascending(49 - i), 1e-11);
}

TEST(SymEig, InvariantUnderOrthogonalSimilarity) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 3; ++trial) {
    const Eigen::MatrixXd a = testutil::random_symmetric(30, rng);
    const Eigen::MatrixXd q = testutil::random_orthogonal(30, rng);
    const Eigen::MatrixXd b = q * a * q.transpose();
    const auto ea = sym_eig(a);
    const auto eb = sym_eig(0.5 * (b + b.transpose()));
    EXPECT_LE((ea.eigenvalues - eb.eigenvalues).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(SymEig, Errors) {
  Eigen::MatrixXd a(2, 2);
  a << 1, 2, 3, 4;
  EXPECT_THROW(sym_eig(a), DomainError);
  EXPECT_THROW(sym_eig(Eigen::MatrixXd::Zero(2, 3)), DomainError);
}

TEST(ClipNonnegative, ReportsMinimum) {
  EigenDecomposition eig{Eigen::Vector3d(1.0, 0.5, -1e-14), Eigen::MatrixXd::Identity(3, 3)};
  EXPECT_DOUBLE_EQ(clip_nonnegative(eig), -1e-14);
  EXPECT_EQ(eig.eigenvalues(2), 0.0);
}

TEST(ApplyFilter, ZeroIterationsGiveZero) {
  std::mt19937_64 rng(3);
  const auto eig = sym_eig(testutil::random_psd(8, rng));
  const Eigen::VectorXd v = testutil::gaussian_vector(8, rng);
  const auto m = FilterMethod::nesterov(0.9, 1.0, 1.0);
  EXPECT_EQ(apply_filter(m, 0, eig, v), Eigen::VectorXd::Zero(8));
}

TEST(ApplyFilter, IdentityOperatorGradientDescent) {
  const auto eig = sym_eig(Eigen::MatrixXd::Identity(5, 5));
  const Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(5, -1.0, 3.0);
  const auto m = FilterMethod::gradient_descent(1.0, 1.0);
  for (int t : {1, 2, 10}) EXPECT_LE((apply_filter(m, t, eig, v) - v).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(ApplyFilter, RejectsEigenvalueAboveKappa) {
  const auto eig = sym_eig(2.0 * Eigen::MatrixXd::Identity(2, 2));
  const auto m = FilterMethod::gradient_descent(1.0, 1.0);
  EXPECT_THROW(apply_filter(m, 3, eig, Eigen::VectorXd::Ones(2)), DomainError);
}

TEST(ApplyFilter, LinearInVector) {
  std::mt19937_64 rng(5);
  const auto eig = sym_eig(testutil::random_psd(20, rng, 1.0, 12));
  for (const auto& m : {FilterMethod::gradient_descent(1.0, 1.0), FilterMethod::nu_method(1.0, 1.0),
                        FilterMethod::nesterov(0.99, 1.0, 1.0)}) {
    for (int trial = 0; trial < 5; ++trial) {
      const Eigen::VectorXd a = testutil::gaussian_vector(20, rng);
      const Eigen::VectorXd b = testutil::gaussian_vector(20, rng);
      const Eigen::VectorXd lhs = apply_filter(m, 17, eig, a + b);
      const Eigen::VectorXd rhs = apply_filter(m, 17, eig, a) + apply_filter(m, 17, eig, b);
      EXPECT_LE((lhs - rhs).cwiseAbs().maxCoeff(), 1e-10 * (1.0 + lhs.cwiseAbs().maxCoeff()));
    }
  }
}

TEST(MatrixPower, Cases) {
  std::mt19937_64 rng(9);
  const Eigen::MatrixXd a = testutil::random_psd(10, rng, 2.0);
  const auto eig = sym_eig(a);
  const Eigen::VectorXd v = testutil::gaussian_vector(10, rng);
  EXPECT_LE((matrix_power_apply(eig, 0.0, v) - v).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((matrix_power_apply(eig, 1.0, v) - a * v).cwiseAbs().maxCoeff(), 1e-10);
  const Eigen::VectorXd half = matrix_power_apply(eig, 0.5, matrix_power_apply(eig, 0.5, v));
  EXPECT_LE((half - a * v).cwiseAbs().maxCoeff(), 1e-10);

  Eigen::MatrixXd four(1, 1);
  four << 4.0;
  EXPECT_NEAR(matrix_power_apply(sym_eig(four), 0.5, Eigen::VectorXd::Ones(1))(0), 2.0, 1e-15);

  EigenDecomposition singular{Eigen::Vector2d(1.0, 0.0), Eigen::MatrixXd::Identity(2, 2)};
  EXPECT_THROW(matrix_power_apply(singular, -0.5, Eigen::VectorXd::Ones(2)), DomainError);
  EXPECT_EQ(matrix_power_apply(singular, 0.0, Eigen::VectorXd::Ones(2)), Eigen::VectorXd::Ones(2));
  EXPECT_EQ(matrix_power_apply(singular, 2.0, Eigen::VectorXd::Ones(2)), Eigen::Vector2d(1.0, 0.0));
}

TEST(EffectiveDimension, Values) {
  const std::vector<double> harmonic{1.0, 0.5, 1.0 / 3.0, 0.25};
  EXPECT_NEAR(effective_dimension(harmonic, 1.0), 77.0 / 60.0, 1e-15);
  const std::vector<double> equal(7, 0.3);
  EXPECT_NEAR(effective_dimension(equal, 0.2), 7 * 0.3 / 0.5, 1e-14);
  EXPECT_THROW(effective_dimension(harmonic, 0.0), DomainError);

  double prev = effective_dimension(harmonic, 1e-6);
  EXPECT_LE(prev, 4.0);
  for (double lambda = 1e-5; lambda < 1e8; lambda *= 10) {
    const double cur = effective_dimension(harmonic, lambda);
    EXPECT_LT(cur, prev);
    prev = cur;
  }
  EXPECT_LT(prev, 1e-6);
}

TEST(EffectiveDimension, PolynomialDecayCapacityBound) {
  for (double gamma : {1.0, 2.0}) {
    std::vector<double> spectrum(2000);
    for (int i = 0; i < 2000; ++i) spectrum[i] = std::pow(i + 1.0, -gamma);
    // Fit c = max of N(lambda) lambda^{1/gamma} on a coarse grid, then check
    // it holds on a dense grid over [1e-4, 1].
    double c = 0.0;
    for (double lambda : {1e-4, 1e-3, 1e-2, 1e-1, 1.0})
      c = std::max(c, effective_dimension(spectrum, lambda) * std::pow(lambda, 1.0 / gamma));
    for (int k = 0; k <= 200; ++k) {
      const double lambda = std::pow(10.0, -4.0 + 4.0 * k / 200.0);
      EXPECT_LE(effective_dimension(spectrum, lambda), 1.05 * c * std::pow(lambda, -1.0 / gamma));
    }
    if (gamma == 2.0) EXPECT_LT(c, 2.0);  // ~ pi/2 for the infinite sum
  }
}
