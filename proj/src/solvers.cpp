#include "accelreg/solvers.hpp"

#include <cmath>
#include <sstream>

#include "accelreg/errors.hpp"

namespace accelreg::solvers {

using filters::FilterMethod;
using filters::MethodKind;

namespace {

void check_operator(const FilterMethod& method, const Eigen::MatrixXd& m,
                    const Eigen::VectorXd& y, int iterations) {
  if (m.rows() != m.cols()) throw DomainError("solver: operator must be square");
  if (m.rows() != y.size()) throw DomainError("solver: label vector length does not match operator");
  if (iterations < 0 || iterations > filters::kMaxIterations)
    throw DomainError("solver: iteration count must be in [0, 1e6]");
  if (!m.allFinite() || !y.allFinite()) throw DataError("solver: non-finite operator or labels");
  const double scale = m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw DomainError("solver: operator is not symmetric");
  // For PSD M both the trace and the max absolute row sum bound the norm;
  // power iteration only runs when neither settles the question.
  const double kappa2 = method.kappa2() * (1.0 + 1e-8);
  if (m.trace() <= kappa2 || m.cwiseAbs().rowwise().sum().maxCoeff() <= kappa2) return;
  const double norm = operator_norm_estimate(m);
  if (norm > kappa2) {
    std::ostringstream msg;
    msg << "solver: operator norm " << norm << " exceeds kappa2=" << method.kappa2();
    throw DomainError(msg.str());
  }
}

void check_iterate(const FilterMethod& method, int t, const Eigen::VectorXd& u, double y_norm) {
  const double limit = 1e6 * std::max(1.0, method.g_bound(t)) * std::max(y_norm, 1e-300);
  const double norm = u.norm();
  if (!std::isfinite(norm) || norm > limit) {
    std::ostringstream msg;
    msg << method.label() << " diverged at t=" << t << " (|u_t|=" << norm
        << "); the step size is too large for the operator norm";
    throw DivergenceError(msg.str());
  }
}

}  // namespace

double operator_norm_estimate(const Eigen::MatrixXd& m, int max_steps) {
  const Eigen::Index n = m.rows();
  if (n == 0) return 0.0;
  // Deterministic start with components in every direction.
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = 1.0 + 0.01 * std::sin(1.0 + i);
  v.normalize();
  double estimate = 0.0;
  for (int k = 0; k < max_steps; ++k) {
    Eigen::VectorXd w = m * v;
    const double next = v.dot(w);
    const double wn = w.norm();
    if (wn == 0.0) return 0.0;
    v = w / wn;
    if (std::abs(next - estimate) <= 1e-10 * std::abs(next)) return std::max(next, wn);
    estimate = next;
  }
  return estimate;
}

void iterate(const FilterMethod& method, const Eigen::MatrixXd& m, const Eigen::VectorXd& y,
             int iterations, const Observer& observe) {
  check_operator(method, m, y, iterations);
  const double y_norm = y.norm();
  const Eigen::Index n = y.size();
  Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd u_prev = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd next(n), v(n);
  observe(0, u);
  for (int t = 0; t < iterations; ++t) {
    std::visit(
        [&](const auto& p) {
          using P = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<P, filters::GradientDescent>) {
            next = u + p.step * (y - m * u);
          } else if constexpr (std::is_same_v<P, filters::NuMethod>) {
            const auto sp = filters::nu_params(t + 1, p.nu, method.kappa2());
            next = u + sp.step * (y - m * u) + sp.momentum * (u - u_prev);
          } else {
            const double b = t == 0 ? 0.0 : filters::nesterov_beta(t, p.beta);
            v = u + b * (u - u_prev);
            next = v + p.step * (y - m * v);
          }
        },
        method.params());
    u_prev.swap(u);
    u.swap(next);
    check_iterate(method, t + 1, u, y_norm);
    observe(t + 1, u);
  }
}

IterateHistory run(const FilterMethod& method, const Eigen::MatrixXd& m, const Eigen::VectorXd& y,
                   int iterations) {
  IterateHistory history{method, {}};
  history.u.reserve(iterations + 1);
  iterate(method, m, y, iterations, [&](int, const Eigen::VectorXd& u) { history.u.push_back(u); });
  return history;
}

IterateHistory run_gd(const Eigen::MatrixXd& m, const Eigen::VectorXd& y, double step,
                      int iterations, double kappa2) {
  if (kappa2 <= 0.0) kappa2 = 1.0 / step;
  return run(FilterMethod::gradient_descent(step, kappa2), m, y, iterations);
}

IterateHistory run_heavy_ball(const Eigen::MatrixXd& m, const Eigen::VectorXd& y, double nu,
                              double kappa2, int iterations) {
  return run(FilterMethod::nu_method(nu, kappa2), m, y, iterations);
}

IterateHistory run_nesterov(const Eigen::MatrixXd& m, const Eigen::VectorXd& y, double step,
                            double beta, double kappa2, int iterations) {
  return run(FilterMethod::nesterov(step, beta, kappa2), m, y, iterations);
}

std::vector<Eigen::VectorXd> heavy_ball_schedule(
    const Eigen::MatrixXd& m, const Eigen::VectorXd& y, int iterations,
    const std::function<filters::StepParams(int)>& schedule) {
  std::vector<Eigen::VectorXd> u(1, Eigen::VectorXd::Zero(y.size()));
  for (int t = 1; t <= iterations; ++t) {
    const auto sp = schedule(t);
    const Eigen::VectorXd& cur = u[t - 1];
    const Eigen::VectorXd prev = t >= 2 ? u[t - 2] : Eigen::VectorXd::Zero(y.size());
    u.push_back(cur + sp.step * (y - m * cur) + sp.momentum * (cur - prev));
  }
  return u;
}

std::vector<Eigen::VectorXd> nesterov_schedule(const Eigen::MatrixXd& m, const Eigen::VectorXd& y,
                                               double step, int iterations,
                                               const std::function<double(int)>& momentum) {
  std::vector<Eigen::VectorXd> u(1, Eigen::VectorXd::Zero(y.size()));
  for (int t = 0; t < iterations; ++t) {
    const Eigen::VectorXd prev = t >= 1 ? u[t - 1] : Eigen::VectorXd::Zero(y.size());
    const Eigen::VectorXd v = u[t] + momentum(t) * (u[t] - prev);
    u.push_back(v + step * (y - m * v));
  }
  return u;
}

Eigen::VectorXd spectral_solution(const FilterMethod& method, int t,
                                  const spectral::EigenDecomposition& eig,
                                  const Eigen::VectorXd& y) {
  return spectral::apply_filter(method, t, eig, y);
}

Eigen::VectorXd predict(const Eigen::MatrixXd& cross_kernel, const Eigen::VectorXd& u,
                        Eigen::Index n) {
  if (cross_kernel.cols() != u.size())
    throw DomainError("predict: cross-kernel columns do not match the coefficient vector");
  if (n < 1) throw DomainError("predict: sample size must be >= 1");
  return cross_kernel * u / static_cast<double>(n);
}

}  // namespace accelreg::solvers
