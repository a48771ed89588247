#pragma once

#include <functional>
#include <vector>

namespace accelreg::quadrature {

// Gauss-Legendre rule on [-1, 1].
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

Rule gauss_legendre(int order);

struct Estimate {
  double value = 0.0;
  double error = 0.0;  // summed |coarse - refined| over accepted panels
};

// Adaptive bisection over [a, b]: a panel is accepted once the rule on the
// panel and on its two halves agree within abs_tol. Throws NumericError with
// the achieved residual if a panel still disagrees at max_depth.
Estimate integrate(const std::function<double(double)>& f, double a, double b,
                   const Rule& rule, double abs_tol, int max_depth = 40);

}  // namespace accelreg::quadrature
