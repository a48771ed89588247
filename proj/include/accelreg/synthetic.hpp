#pragma once

// Finite-domain kernel learning problem with a prescribed spectrum.
//
// The domain is N points with the uniform distribution, so L2 is R^N with the
// inner product scaled by 1/N. The integral operator is L = U diag(d) U^T with
// d_i = i^-gamma, the target is f_H = L^r g0 and labels are f_H plus Gaussian
// noise. Kernel values are K(z_i, z_j) = N L_ij, which makes the 1/N-weighted
// integral operator of K equal to L.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "accelreg/filters.hpp"

namespace accelreg::synthetic {

inline constexpr int kMaxDomainSize = 100'000;

struct ProblemSpec {
  int size = 2000;        // N
  double gamma = 1.0;     // spectrum decay
  double source = 0.5;    // r
  double noise = 0.5;     // standard deviation of the label noise
  std::uint64_t seed = 0;
  int reflectors = 0;     // 0 selects min(N, 200)
};

class SyntheticProblem {
 public:
  int size() const { return static_cast<int>(spectrum_.size()); }
  const ProblemSpec& spec() const { return spec_; }
  int reflectors() const { return static_cast<int>(householder_.cols()); }

  // d_i = i^-gamma, descending.
  const Eigen::VectorXd& spectrum() const { return spectrum_; }
  // g0 with (1/N) |g0|^2 = 1.
  const Eigen::VectorXd& source() const { return source_; }
  // U^T g0.
  const Eigen::VectorXd& source_coefficients() const { return source_coeffs_; }
  // f_H = U diag(d^r) U^T g0.
  const Eigen::VectorXd& target() const { return target_; }
  // U^T f_H = d^r (U^T g0).
  const Eigen::VectorXd& target_coefficients() const { return target_coeffs_; }
  // y = f_H + noise, one label per domain point.
  const Eigen::VectorXd& labels() const { return labels_; }

  // U x and U^T x for a block of column vectors.
  Eigen::MatrixXd apply_u(Eigen::MatrixXd x) const;
  Eigen::MatrixXd apply_ut(Eigen::MatrixXd x) const;

  // Builds a problem whose source is given in eigen-coordinates (U^T g0),
  // used for spike sources. No normalization is applied.
  static SyntheticProblem from_coefficients(const ProblemSpec& spec,
                                            const Eigen::VectorXd& source_coefficients);

  friend SyntheticProblem generate_problem(const ProblemSpec& spec);

 private:
  SyntheticProblem() = default;
  void init_operator(const ProblemSpec& spec);
  // `exact`, when given, is stored as g0 instead of U coeffs.
  void set_source(const Eigen::VectorXd& coeffs, const Eigen::VectorXd* exact);

  ProblemSpec spec_;
  // Compact Householder QR storage: reflector vectors below the diagonal.
  Eigen::MatrixXd householder_;
  Eigen::VectorXd householder_coeffs_;
  Eigen::VectorXd spectrum_;
  Eigen::VectorXd source_, source_coeffs_;
  Eigen::VectorXd target_, target_coeffs_;
  Eigen::VectorXd labels_;
};

// Deterministic in spec.seed. U is the orthogonal factor of the Householder QR
// of a seeded N x H Gaussian matrix, applied implicitly.
SyntheticProblem generate_problem(const ProblemSpec& spec);

enum class Replacement { With, Without };

struct Sample {
  std::vector<int> indices;    // 0-based domain indices
  Eigen::MatrixXd kernel;      // K_jk = N L(i_j, i_k)
  Eigen::VectorXd labels;      // y at the drawn indices
  Eigen::MatrixXd op;          // K / n
  double kappa2 = 0.0;         // max diagonal of K
  Eigen::MatrixXd coordinates; // U^T restricted to the drawn columns, N x n
};

// Draws n indices uniformly (with replacement by default); deterministic in
// seed. Without replacement is a diagnostic mode and requires n <= N.
Sample draw_sample(const SyntheticProblem& problem, int n, std::uint64_t seed,
                   Replacement mode = Replacement::With);

// Estimator values on the whole domain for coefficients u:
// f(z) = (1/n) sum_j K(z, z_{i_j}) u_j.
Eigen::VectorXd predict_domain(const SyntheticProblem& problem, const Sample& sample,
                               const Eigen::VectorXd& u);

// (1/N) sum_k (f_k - f_H,k)^2.
double excess_risk(const Eigen::VectorXd& estimate, const SyntheticProblem& problem);

// (1/N) sum_i d_i^-2a (U^T (f - f_H))_i^2 for a in [0, 1/2].
double weighted_error(const Eigen::VectorXd& estimate, const SyntheticProblem& problem, double a);

// Infinite-sample squared bias |r_t(L) f_H|^2 for t = 0..T.
std::vector<double> population_bias(const SyntheticProblem& problem,
                                    const filters::FilterMethod& method, int iterations);

// Excess risk of predict_domain(u) as a quadratic form in u, so that each
// evaluation costs O(n^2) instead of O(N n).
class RiskEvaluator {
 public:
  RiskEvaluator(const SyntheticProblem& problem, const Sample& sample);
  double operator()(const Eigen::VectorXd& u) const;

 private:
  Eigen::MatrixXd quadratic_;
  Eigen::VectorXd linear_;
  double constant_ = 0.0;
  double inv_size_ = 0.0;
};

}  // namespace accelreg::synthetic
