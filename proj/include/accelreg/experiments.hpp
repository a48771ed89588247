#pragma once

// Repetition harness for the synthetic early-stopping experiments: mean and
// variance of the excess risk along the iterations, location of the minima,
// theoretical stopping rules and log-log exponent fits.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "accelreg/filters.hpp"
#include "accelreg/synthetic.hpp"

namespace accelreg::experiments {

// A method with hyperparameters relative to the sample's kappa2, so that one
// spec can be reused across repetitions with different kernels.
struct MethodSpec {
  filters::MethodKind kind = filters::MethodKind::GradientDescent;
  double step_scale = 1.0;  // alpha = step_scale / kappa2 (GD, Nesterov)
  double beta = 1.0;        // Nesterov
  double nu = 1.0;          // nu-method

  static MethodSpec gd(double step_scale = 1.0);
  static MethodSpec nu_method(double nu = 1.0);
  static MethodSpec nesterov(double step_scale = 0.99, double beta = 1.0);

  filters::FilterMethod instantiate(double kappa2) const;
  std::string label() const;
};

struct SimulationConfig {
  int domain_size = 2000;  // N
  int sample_size = 100;   // n
  double gamma = 1.0;
  double source = 0.5;     // r
  double noise = 0.5;
  // 0 selects 20 times the largest stopping rule among the methods.
  int iterations = 0;
  // Constant in front of the stopping rules.
  double rule_multiplier = 1.0;
  int repetitions = 50;
  std::vector<MethodSpec> methods{MethodSpec::gd(), MethodSpec::nu_method(),
                                  MethodSpec::nesterov()};
  std::uint64_t master_seed = 0;
  // Without replacement is the n = N diagnostic mode.
  synthetic::Replacement sampling = synthetic::Replacement::With;
  // Worker threads; 0 uses the hardware concurrency.
  int threads = 0;

  // Throws DomainError on any invalid field.
  void validate() const;
  int resolved_iterations() const;
};

struct ErrorCurve {
  std::string label;
  // Index t - 1 holds iteration t, for t = 1..T.
  std::vector<double> mean;
  std::vector<double> var;
  int argmin_t = 0;

  int iterations() const { return static_cast<int>(mean.size()); }
  double min_mean() const { return mean[argmin_t - 1]; }
};

// Repetition k uses the problem seeded by master_seed and the sample seeded
// by master_seed + k. Results do not depend on the thread count.
std::vector<ErrorCurve> run_simulation(const SimulationConfig& config);

// First t (1-based) attaining the minimum of values.
int first_argmin(std::span<const double> values);

// Theoretical stopping rule with unit constant: n^{1/2} (GD) or n^{1/4}
// (accelerated) in the attainable case, n^{gamma/(2 gamma r + 1)} and
// n^{gamma/(4 gamma r + 2)} otherwise, scaled by multiplier, rounded, >= 1.
int stopping_rule(int n, double gamma, double r, bool accelerated, bool attainable,
                  double multiplier = 1.0);

// Least-squares slope of log y against log x. Needs >= 3 positive points.
double fit_exponent(std::span<const double> x, std::span<const double> y);

}  // namespace accelreg::experiments
