#pragma once

// The three iterations run in coefficient space against a symmetric PSD
// operator M (in kernel form M = K/n):
//   gradient descent  u_{t+1} = u_t + a (y - M u_t)
//   nu-method         u_{t+1} = u_t + a_{t+1} (y - M u_t) + b_{t+1} (u_t - u_{t-1})
//   Nesterov          v_t = u_t + b_t (u_t - u_{t-1}),  u_{t+1} = v_t + a (y - M v_t)
// all started from u_{-1} = u_0 = 0, so that u_t = g_t(M) y.

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "accelreg/filters.hpp"
#include "accelreg/spectral.hpp"

namespace accelreg::solvers {

struct IterateHistory {
  filters::FilterMethod method;
  // u[t] for t = 0..T.
  std::vector<Eigen::VectorXd> u;

  int iterations() const { return static_cast<int>(u.size()) - 1; }
};

// Called with (t, u_t) for t = 0..T. Only the last two iterates are kept by
// the driver, so an observer that needs history must copy.
using Observer = std::function<void(int, const Eigen::VectorXd&)>;

// Checks that M is symmetric and that kappa2 of the method bounds its norm,
// then streams the iterates. Throws DivergenceError when an iterate is
// non-finite or exceeds 1e6 times the filter bound g_bound(t) |y|.
void iterate(const filters::FilterMethod& method, const Eigen::MatrixXd& m,
             const Eigen::VectorXd& y, int iterations, const Observer& observe);

IterateHistory run(const filters::FilterMethod& method, const Eigen::MatrixXd& m,
                   const Eigen::VectorXd& y, int iterations);

// kappa2 defaults to 1/step, the largest operator norm the step tolerates.
IterateHistory run_gd(const Eigen::MatrixXd& m, const Eigen::VectorXd& y, double step,
                      int iterations, double kappa2 = 0.0);
IterateHistory run_heavy_ball(const Eigen::MatrixXd& m, const Eigen::VectorXd& y, double nu,
                              double kappa2, int iterations);
IterateHistory run_nesterov(const Eigen::MatrixXd& m, const Eigen::VectorXd& y, double step,
                            double beta, double kappa2, int iterations);

// Heavy-ball with an arbitrary (step, momentum) schedule; schedule(t) gives
// the parameters used to form u_t from u_{t-1} and u_{t-2}. No norm checks.
std::vector<Eigen::VectorXd> heavy_ball_schedule(
    const Eigen::MatrixXd& m, const Eigen::VectorXd& y, int iterations,
    const std::function<filters::StepParams(int)>& schedule);

// Nesterov with constant step and an arbitrary momentum sequence b_t used at
// step t -> t + 1. No norm checks.
std::vector<Eigen::VectorXd> nesterov_schedule(const Eigen::MatrixXd& m, const Eigen::VectorXd& y,
                                               double step, int iterations,
                                               const std::function<double(int)>& momentum);

// g_t(M) y through the eigendecomposition of M.
Eigen::VectorXd spectral_solution(const filters::FilterMethod& method, int t,
                                  const spectral::EigenDecomposition& eig,
                                  const Eigen::VectorXd& y);

// (1/n) K_cross u: predictions of the kernel estimator with coefficients u/n.
Eigen::VectorXd predict(const Eigen::MatrixXd& cross_kernel, const Eigen::VectorXd& u,
                        Eigen::Index n);

// Power-iteration estimate of the largest eigenvalue of a symmetric PSD M.
double operator_norm_estimate(const Eigen::MatrixXd& m, int max_steps = 200);

}  // namespace accelreg::solvers
