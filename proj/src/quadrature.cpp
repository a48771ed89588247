#include "accelreg/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "accelreg/errors.hpp"

namespace accelreg::quadrature {

Rule gauss_legendre(int order) {
  if (order < 1) throw DomainError("gauss_legendre: order must be >= 1");
  Rule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const unsigned n = static_cast<unsigned>(order);
  for (int i = 0; i < (order + 1) / 2; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      const double p = std::legendre(n, x);
      const double p_prev = std::legendre(n - 1, x);
      dp = order * (x * p - p_prev) / (x * x - 1.0);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double p_prev = std::legendre(n - 1, x);
    const double p = std::legendre(n, x);
    dp = order * (x * p - p_prev) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[order - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  return rule;
}

namespace {

double apply(const std::function<double(double)>& f, double a, double b,
             const Rule& rule) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double sum = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k)
    sum += rule.weights[k] * f(mid + half * rule.nodes[k]);
  return half * sum;
}

void refine(const std::function<double(double)>& f, double a, double b,
            double coarse, const Rule& rule, double tol, int depth,
            int max_depth, Estimate& out) {
  const double mid = 0.5 * (a + b);
  const double left = apply(f, a, mid, rule);
  const double right = apply(f, mid, b, rule);
  const double fine = left + right;
  const double diff = std::abs(fine - coarse);
  if (diff <= tol) {
    out.value += fine;
    out.error += diff;
    return;
  }
  if (depth >= max_depth) {
    std::ostringstream msg;
    msg << "quadrature did not converge on [" << a << ", " << b
        << "]: achieved residual " << diff << " > tolerance " << tol;
    throw NumericError(msg.str());
  }
  refine(f, a, mid, left, rule, tol, depth + 1, max_depth, out);
  refine(f, mid, b, right, rule, tol, depth + 1, max_depth, out);
}

}  // namespace

Estimate integrate(const std::function<double(double)>& f, double a, double b,
                   const Rule& rule, double abs_tol, int max_depth) {
  Estimate out;
  refine(f, a, b, apply(f, a, b, rule), rule, abs_tol, 0, max_depth, out);
  return out;
}

}  // namespace accelreg::quadrature
