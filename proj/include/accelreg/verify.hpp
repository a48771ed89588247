#pragma once

// Numerical verification of the filter bounds on a sigma grid: residual
// identity, uniform residual bound, filter-size bounds, qualification bounds,
// the Nesterov auxiliary-polynomial inequalities, the nu-method qualification
// exponent and Jacobi orthogonality of the nu-method residuals.

#include <string>
#include <vector>

namespace accelreg::verify {

struct Options {
  double kappa2 = 1.0;
  int grid_points = 512;
  double sigma_min = 1e-8;
  int iterations = 2000;
  // Steps are step_scale / kappa2. Scales outside the admissible range are
  // accepted so that a violated bound can be demonstrated.
  double gd_step_scale = 1.0;
  double nesterov_step_scale = 0.99;
  double beta = 1.0;
  double nu = 1.0;
  std::vector<double> slope_nus{1.0, 2.0};
  int slope_t_min = 50;
  int slope_t_max = 500;
  double slope_slack = 0.1;
  double jacobi_nu = 1.0;
  int jacobi_max_degree = 6;
  double jacobi_tolerance = 1e-4;

  // Throws DomainError.
  void validate() const;
};

enum class Status { Pass, Fail, Skip };

struct CheckResult {
  std::string name;
  std::string bound;
  Status status = Status::Pass;
  // Largest (value - allowed) seen; <= 0 means the check holds.
  double worst_margin = 0.0;
  std::string location;
};

std::vector<CheckResult> run_suite(const Options& options);

bool all_passed(const std::vector<CheckResult>& results);

// Fixed-width text report, one line per check, then a summary line.
std::string format_report(const std::vector<CheckResult>& results);

}  // namespace accelreg::verify
