#include "accelreg/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

#include "accelreg/errors.hpp"
#include "accelreg/solvers.hpp"
#include "loglog.hpp"

namespace accelreg::experiments {

using filters::FilterMethod;
using filters::MethodKind;

MethodSpec MethodSpec::gd(double step_scale) {
  return {MethodKind::GradientDescent, step_scale, 1.0, 1.0};
}

MethodSpec MethodSpec::nu_method(double nu) { return {MethodKind::NuMethod, 1.0, 1.0, nu}; }

MethodSpec MethodSpec::nesterov(double step_scale, double beta) {
  return {MethodKind::Nesterov, step_scale, beta, 1.0};
}

FilterMethod MethodSpec::instantiate(double kappa2) const {
  switch (kind) {
    case MethodKind::GradientDescent:
      return FilterMethod::gradient_descent(step_scale / kappa2, kappa2);
    case MethodKind::NuMethod:
      return FilterMethod::nu_method(nu, kappa2);
    case MethodKind::Nesterov:
      return FilterMethod::nesterov(step_scale / kappa2, beta, kappa2);
  }
  throw DomainError("unknown method kind");
}

std::string MethodSpec::label() const {
  switch (kind) {
    case MethodKind::GradientDescent: return "gd";
    case MethodKind::NuMethod: return "nu";
    case MethodKind::Nesterov: return "nesterov";
  }
  return "?";
}

void SimulationConfig::validate() const {
  auto fail = [](const std::string& what) { throw DomainError("simulation config: " + what); };
  if (domain_size < 2 || domain_size > synthetic::kMaxDomainSize)
    fail("N must lie in [2, " + std::to_string(synthetic::kMaxDomainSize) + "]");
  if (sample_size < 2 || sample_size > domain_size) fail("n must lie in [2, N]");
  if (!(gamma >= 1.0) || !std::isfinite(gamma)) fail("gamma must be >= 1");
  if (!(source >= 0.0) || !std::isfinite(source)) fail("r must be >= 0");
  if (!(noise >= 0.0) || !std::isfinite(noise)) fail("noise must be >= 0");
  if (iterations < 0 || iterations > filters::kMaxIterations) fail("T out of range");
  if (repetitions < 1) fail("repetitions must be >= 1");
  if (!(rule_multiplier > 0.0) || !std::isfinite(rule_multiplier)) fail("rule_multiplier must be > 0");
  if (threads < 0) fail("threads must be >= 0");
  if (methods.empty()) fail("at least one method is required");
  for (const auto& m : methods) {
    // Probe with kappa2 = 1 to reuse the factory checks.
    try {
      (void)m.instantiate(1.0);
    } catch (const DomainError& e) {
      fail(m.label() + ": " + e.what());
    }
  }
}

int SimulationConfig::resolved_iterations() const {
  if (iterations > 0) return iterations;
  int rule = 1;
  for (const auto& m : methods)
    rule = std::max(rule, stopping_rule(sample_size, gamma, source,
                                        m.kind != MethodKind::GradientDescent, source >= 0.5,
                                        rule_multiplier));
  return 20 * rule;
}

namespace {

// risks[m][t - 1] for one repetition.
using RepResult = std::vector<std::vector<double>>;

RepResult run_repetition(const SimulationConfig& cfg, const synthetic::SyntheticProblem& problem,
                         int k, int iterations) {
  const auto sample = synthetic::draw_sample(problem, cfg.sample_size, cfg.master_seed + k,
                                            cfg.sampling);
  const synthetic::RiskEvaluator risk(problem, sample);
  RepResult out;
  out.reserve(cfg.methods.size());
  for (const auto& spec : cfg.methods) {
    std::vector<double> curve(iterations);
    solvers::iterate(spec.instantiate(sample.kappa2), sample.op, sample.labels, iterations,
                     [&](int t, const Eigen::VectorXd& u) {
                       if (t > 0) curve[t - 1] = risk(u);
                     });
    out.push_back(std::move(curve));
  }
  return out;
}

[[noreturn]] void rethrow_with_repetition(std::exception_ptr error, int k) {
  const auto prefix = "repetition " + std::to_string(k) + ": ";
  try {
    std::rethrow_exception(error);
  } catch (const DivergenceError& e) {
    throw DivergenceError(prefix + e.what());
  } catch (const NumericError& e) {
    throw NumericError(prefix + e.what());
  }
}

}  // namespace

std::vector<ErrorCurve> run_simulation(const SimulationConfig& config) {
  config.validate();
  const int iterations = config.resolved_iterations();
  synthetic::ProblemSpec spec;
  spec.size = config.domain_size;
  spec.gamma = config.gamma;
  spec.source = config.source;
  spec.noise = config.noise;
  spec.seed = config.master_seed;
  const auto problem = synthetic::generate_problem(spec);

  const int reps = config.repetitions;
  std::vector<RepResult> results(reps);
  std::vector<std::exception_ptr> errors(reps);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int k = next++; k < reps; k = next++) {
      try {
        results[k] = run_repetition(config, problem, k, iterations);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  int threads = config.threads > 0 ? config.threads
                                   : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, reps);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  for (int k = 0; k < reps; ++k)
    if (errors[k]) rethrow_with_repetition(errors[k], k);

  std::vector<ErrorCurve> curves;
  for (std::size_t m = 0; m < config.methods.size(); ++m) {
    ErrorCurve c;
    c.label = config.methods[m].label();
    c.mean.assign(iterations, 0.0);
    c.var.assign(iterations, 0.0);
    for (int t = 0; t < iterations; ++t) {
      double sum = 0.0;
      for (int k = 0; k < reps; ++k) sum += results[k][m][t];
      const double mean = sum / reps;
      double ss = 0.0;
      for (int k = 0; k < reps; ++k) {
        const double d = results[k][m][t] - mean;
        ss += d * d;
      }
      c.mean[t] = mean;
      c.var[t] = reps > 1 ? ss / (reps - 1) : 0.0;
    }
    c.argmin_t = first_argmin(c.mean);
    curves.push_back(std::move(c));
  }
  return curves;
}

int first_argmin(std::span<const double> values) {
  if (values.empty()) throw DomainError("first_argmin: empty input");
  return static_cast<int>(std::min_element(values.begin(), values.end()) - values.begin()) + 1;
}

int stopping_rule(int n, double gamma, double r, bool accelerated, bool attainable,
                  double multiplier) {
  if (n < 2) throw DomainError("stopping_rule: n must be >= 2");
  if (!(multiplier > 0.0)) throw DomainError("stopping_rule: multiplier must be > 0");
  double exponent;
  if (attainable) {
    exponent = accelerated ? 0.25 : 0.5;
  } else {
    if (!(gamma >= 1.0) || !(r >= 0.0)) throw DomainError("stopping_rule: need gamma >= 1, r >= 0");
    exponent = accelerated ? gamma / (4.0 * gamma * r + 2.0) : gamma / (2.0 * gamma * r + 1.0);
  }
  const double t = std::round(multiplier * std::pow(static_cast<double>(n), exponent));
  return static_cast<int>(std::max(1.0, t));
}

double fit_exponent(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DomainError("fit_exponent: x and y lengths differ");
  if (x.size() < 3) throw DomainError("fit_exponent: need at least 3 points");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0) || !std::isfinite(x[i]) || !std::isfinite(y[i])) {
      std::ostringstream msg;
      msg << "fit_exponent: point " << i << " is not positive and finite";
      throw DomainError(msg.str());
    }
  }
  return detail::loglog_slope(x, y);
}

}  // namespace accelreg::experiments
