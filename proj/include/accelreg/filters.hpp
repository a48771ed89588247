#pragma once

// Spectral filter polynomials of gradient descent, the nu-method and Nesterov
// acceleration for least squares.
//
// Every iteration started at w_0 = 0 produces w_t = g_t(S) X*y for a polynomial
// g_t applied to the empirical covariance S. The residual polynomial
// r_t(s) = 1 - s g_t(s) controls the bias. This header evaluates both on scalar
// grids through the exact three-term recursions of each method and provides
// the grid-sup diagnostics used to check the filter bounds.

#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace accelreg::filters {

enum class MethodKind { GradientDescent, NuMethod, Nesterov };

struct GradientDescent {
  double step;
};

struct NuMethod {
  double nu;
};

struct Nesterov {
  double step;
  double beta;
};

// Whether the factory functions enforce the step-size conditions. Skip exists
// so the verification suite can demonstrate a violated bound.
enum class Checks { Enforce, Skip };

class FilterMethod {
 public:
  using Params = std::variant<GradientDescent, NuMethod, Nesterov>;

  // Requires step * kappa2 <= 1.
  static FilterMethod gradient_descent(double step, double kappa2,
                                       Checks checks = Checks::Enforce);
  // Any nu > 0. The filter constants (F0 = 1, E = 2) are only claimed for
  // kappa2 <= 1; see bound_constants_apply().
  static FilterMethod nu_method(double nu, double kappa2);
  // Requires step * kappa2 < 1 and beta >= 1.
  static FilterMethod nesterov(double step, double beta, double kappa2,
                               Checks checks = Checks::Enforce);

  MethodKind kind() const;
  const Params& params() const { return params_; }
  double kappa2() const { return kappa2_; }
  bool accelerated() const { return kind() != MethodKind::GradientDescent; }
  bool bound_constants_apply() const;

  // Regularization parameter matched to iteration t: 1/t for gradient
  // descent, 1/t^2 for the accelerated methods, and 1 at t = 0.
  double lambda(int t) const;

  // Pointwise bound on |g_t| from the filter constant E: alpha t for gradient
  // descent, 2 alpha t^2 for Nesterov, 2 t^2 / kappa2 for the nu-method.
  double g_bound(int t) const;

  // Short stable name used in CSV output: "gd", "nu" or "nesterov".
  std::string_view label() const;

 private:
  FilterMethod(Params params, double kappa2) : params_(params), kappa2_(kappa2) {}

  Params params_;
  double kappa2_;
};

// Step size and momentum applied when moving from iterate t-1 to iterate t.
struct StepParams {
  double step;
  double momentum;
};

// nu-method parameters (alpha_t, beta_t) for t >= 1.
StepParams nu_params(int t, double nu, double kappa2);

// Nesterov momentum (t - 1) / (t + beta) for t >= 1, beta >= 1.
double nesterov_beta(int t, double beta);

// Advances g_t and r_t for a fixed set of points simultaneously. Points may
// include 0 (needed for rank-deficient operators); callers that want the
// filter_trace domain checks should use filter_trace instead.
class FilterRecurrence {
 public:
  FilterRecurrence(const FilterMethod& method, std::span<const double> sigma);

  int t() const { return t_; }
  std::span<const double> sigma() const { return sigma_; }
  std::span<const double> g() const { return g_; }
  std::span<const double> r() const { return r_; }

  // Moves to t + 1. Throws NumericError naming (t, sigma) on a non-finite
  // value.
  void advance();
  void advance_to(int t);

 private:
  FilterMethod method_;
  std::vector<double> sigma_;
  std::vector<double> g_, r_;
  std::vector<double> g_prev_, r_prev_;
  int t_ = 0;
};

// Maximum iteration count accepted by filter_trace and the solvers.
inline constexpr int kMaxIterations = 1'000'000;

struct FilterTrace {
  std::vector<double> sigma;
  // Rows indexed by t = 0..T, columns by sigma.
  std::vector<std::vector<double>> g;
  std::vector<std::vector<double>> r;
  std::vector<double> lambda;

  int iterations() const { return static_cast<int>(g.size()) - 1; }
};

// Samples g_t and r_t for t = 0..T. The grid must be strictly increasing in
// (0, kappa2].
FilterTrace filter_trace(const FilterMethod& method,
                         std::span<const double> sigma_grid, int iterations);

// `points` log-spaced values from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, int points);

// Analytic maximizers (1/alpha) q/(t+q) of s^q (1 - alpha s)^t for each q and
// t = 1..T that fall inside (lo, hi].
std::vector<double> gd_maximizers(double step, std::span<const double> qs,
                                  int iterations, double lo, double hi);

// Sorted union of two grids with exact duplicates removed.
std::vector<double> merge_grids(std::span<const double> a,
                                std::span<const double> b);

// s_q(t) = max over the grid of sigma^q |r_t(sigma)|, for t = 0..T.
std::vector<double> qualification_sup(const FilterTrace& trace, double q);

// Least-squares slope of log s(t) against log t over t in [t_min, t_max],
// where s is indexed by t.
double qualification_slope(std::span<const double> s, int t_min, int t_max);

struct GridPoint {
  int t = 0;
  double sigma = 0.0;
};

// Intermediate objects of the Nesterov residual analysis. With
// theta_t = beta/(t+beta) the residual is a damped convex combination of r_t
// and the auxiliary polynomial R_t, and
//   sigma r_t^2 <= (theta_{t-1}^2 / alpha) (1 - alpha sigma)^{t+1}.
struct NesterovAuxiliary {
  // Rows t = 0..T.
  std::vector<std::vector<double>> R;
  // sigma r_t^2 - (theta_{t-1}^2/alpha)(1 - alpha sigma)^{t+1}; row 0 has no
  // bound and is filled with -infinity.
  std::vector<std::vector<double>> margin;
  double max_abs_R = 0.0;
  GridPoint max_abs_R_at;
  double max_margin = 0.0;
  GridPoint max_margin_at;
};

NesterovAuxiliary nesterov_auxiliary(std::span<const double> sigma_grid,
                                     int iterations, double step, double beta,
                                     double kappa2);

// Integral over [0, 1] of r_t r_s against the weight
// sigma^{2 nu - 1/2} (1 - sigma)^{-1/2}, for nu-method residuals with
// kappa2 = 1. `nodes` is the Gauss-Legendre order per panel.
double jacobi_orthogonality(double nu, int t, int s, int nodes = 20);

// The same inner product divided by sqrt(I_tt I_ss).
double jacobi_normalized(double nu, int t, int s, int nodes = 20);

}  // namespace accelreg::filters
