#include "accelreg/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "accelreg/csv.hpp"
#include "accelreg/errors.hpp"
#include "accelreg/filters.hpp"

namespace accelreg::verify {

using filters::Checks;
using filters::FilterMethod;
using filters::FilterRecurrence;

namespace {

constexpr double kIdentityTol = 1e-9;
constexpr double kBoundTol = 1e-12;

CheckResult named(std::string name, std::string bound) {
  CheckResult r;
  r.name = std::move(name);
  r.bound = std::move(bound);
  return r;
}

// Tracks the worst (value - allowed) of one pointwise check.
struct Tracker {
  CheckResult result;
  double worst = -std::numeric_limits<double>::infinity();
  int t = -1;
  double sigma = 0.0;

  Tracker(std::string name, std::string bound) { result = named(std::move(name), std::move(bound)); }

  void observe(double excess, int at_t, double at_sigma) {
    if (excess > worst || std::isnan(excess)) {
      worst = std::isnan(excess) ? std::numeric_limits<double>::infinity() : excess;
      t = at_t;
      sigma = at_sigma;
    }
  }

  CheckResult finish(double tolerance) {
    result.worst_margin = worst;
    result.status = worst <= tolerance ? Status::Pass : Status::Fail;
    result.location = "t=" + std::to_string(t) + " sigma=" + csv::format(sigma);
    return result;
  }
};

CheckResult skipped(std::string name, std::string bound, std::string why) {
  auto r = named(std::move(name), std::move(bound));
  r.status = Status::Skip;
  r.location = std::move(why);
  return r;
}

std::string fmt(double v) { return csv::format(v); }

// Pointwise checks that need g_t and r_t along the whole grid.
void pointwise_checks(const Options& o, const FilterMethod& method,
                      const std::vector<double>& grid, std::vector<CheckResult>& out) {
  const std::string label(method.label());
  const bool constants = method.bound_constants_apply();
  const double alpha = method.kind() == filters::MethodKind::GradientDescent
                           ? std::get<filters::GradientDescent>(method.params()).step
                       : method.kind() == filters::MethodKind::Nesterov
                           ? std::get<filters::Nesterov>(method.params()).step
                           : 0.0;

  Tracker identity("residual_identity[" + label + "]", "|1 - sigma g_t - r_t| <= 1e-9");
  Tracker f0("residual_bound[" + label + "]", "|r_t| <= 1 + 1e-12");
  std::string e_text = method.kind() == filters::MethodKind::GradientDescent ? "|g_t| <= alpha t"
                       : method.kind() == filters::MethodKind::Nesterov      ? "|g_t| <= 2 alpha t^2"
                                                                             : "|g_t| <= 2 t^2 / kappa2";
  Tracker ebound("filter_bound[" + label + "]", e_text);

  const std::vector<double> gd_qs{0.5, 1.0, 2.0};
  std::vector<Tracker> gd_qual;
  if (method.kind() == filters::MethodKind::GradientDescent)
    for (double q : gd_qs)
      gd_qual.emplace_back("gd_qualification[q=" + fmt(q) + "]",
                           "sup sigma^q |r_t| <= (q/alpha)^q t^-q");
  std::vector<Tracker> nest_qual;
  double nest_const = 0.0;
  if (method.kind() == filters::MethodKind::Nesterov) {
    nest_qual.emplace_back("nesterov_qualification[q=0.5]",
                           "sup sigma^(1/2) |r_t| <= (beta^2/alpha)^(1/2) t^-1");
    nest_const = std::sqrt(o.beta * o.beta / alpha);
  }

  std::vector<double> sqrt_sigma(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) sqrt_sigma[i] = std::sqrt(grid[i]);

  FilterRecurrence rec(method, grid);
  for (int t = 0;; ++t) {
    const auto g = rec.g();
    const auto r = rec.r();
    const double gb = t > 0 ? method.g_bound(t) : 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double s = grid[i];
      const double ar = std::abs(r[i]);
      identity.observe(std::abs(1.0 - s * g[i] - r[i]), t, s);
      f0.observe(ar - 1.0, t, s);
      if (t == 0) continue;
      ebound.observe(std::abs(g[i]) - gb * (1.0 + kBoundTol), t, s);
      for (std::size_t k = 0; k < gd_qual.size(); ++k) {
        const double q = gd_qs[k];
        const double value = (q == 0.5 ? sqrt_sigma[i] : q == 1.0 ? s : s * s) * ar;
        const double bound = std::pow(q / alpha, q) * std::pow(static_cast<double>(t), -q);
        gd_qual[k].observe(value - bound * (1.0 + kBoundTol), t, s);
      }
      if (!nest_qual.empty())
        nest_qual[0].observe(sqrt_sigma[i] * ar - nest_const / t * (1.0 + kBoundTol), t, s);
    }
    if (t == o.iterations) break;
    rec.advance();
  }

  out.push_back(identity.finish(kIdentityTol));
  if (constants) {
    out.push_back(f0.finish(kBoundTol));
    out.push_back(ebound.finish(0.0));
  } else {
    const std::string why = "constants not claimed for this step/kappa2";
    out.push_back(skipped(f0.result.name, f0.result.bound, why));
    out.push_back(skipped(ebound.result.name, ebound.result.bound, why));
  }
  for (auto& q : gd_qual) out.push_back(q.finish(0.0));
  for (auto& q : nest_qual) out.push_back(q.finish(0.0));
}

void nesterov_aux_checks(const Options& o, const std::vector<double>& grid,
                         std::vector<CheckResult>& out) {
  const double alpha = o.nesterov_step_scale / o.kappa2;
  const auto aux = filters::nesterov_auxiliary(grid, o.iterations, alpha, o.beta, o.kappa2);
  auto r = named("nesterov_auxiliary_bound", "|R_t| <= 1 + 1e-12");
  r.worst_margin = aux.max_abs_R - 1.0;
  r.status = r.worst_margin <= kBoundTol ? Status::Pass : Status::Fail;
  r.location = "t=" + std::to_string(aux.max_abs_R_at.t) + " sigma=" + fmt(aux.max_abs_R_at.sigma);
  out.push_back(r);

  auto m = named("nesterov_sigma_r2_margin",
                 "sigma r_t^2 <= (theta_{t-1}^2/alpha)(1 - alpha sigma)^{t+1} + 1e-12");
  m.worst_margin = aux.max_margin;
  m.status = m.worst_margin <= kBoundTol ? Status::Pass : Status::Fail;
  m.location = "t=" + std::to_string(aux.max_margin_at.t) + " sigma=" + fmt(aux.max_margin_at.sigma);
  out.push_back(m);
}

void nu_slope_checks(const Options& o, const std::vector<double>& grid,
                     std::vector<CheckResult>& out) {
  for (double nu : o.slope_nus) {
    const std::string name = "nu_qualification_slope[nu=" + fmt(nu) + "]";
    const std::string bound = "slope of sup sigma^nu |r_t| over t in [" +
                              std::to_string(o.slope_t_min) + ", " + std::to_string(o.slope_t_max) +
                              "] <= -2 nu + " + fmt(o.slope_slack);
    if (o.iterations < o.slope_t_max) {
      out.push_back(skipped(name, bound, "iterations below the slope window"));
      continue;
    }
    const auto method = FilterMethod::nu_method(nu, o.kappa2);
    FilterRecurrence rec(method, grid);
    std::vector<double> sup(o.slope_t_max + 1, 0.0);
    for (int t = 0;; ++t) {
      const auto r = rec.r();
      double best = 0.0;
      for (std::size_t i = 0; i < grid.size(); ++i)
        best = std::max(best, std::pow(grid[i], nu) * std::abs(r[i]));
      sup[t] = best;
      if (t == o.slope_t_max) break;
      rec.advance();
    }
    const double slope = filters::qualification_slope(sup, o.slope_t_min, o.slope_t_max);
    auto r = named(name, bound);
    r.worst_margin = slope - (-2.0 * nu + o.slope_slack);
    r.status = r.worst_margin <= 0.0 ? Status::Pass : Status::Fail;
    r.location = "slope=" + fmt(slope);
    out.push_back(r);
  }
}

void jacobi_checks(const Options& o, std::vector<CheckResult>& out) {
  auto r = named("jacobi_orthogonality[nu=" + fmt(o.jacobi_nu) + "]",
                 "|<r_t, r_s>| / sqrt(<r_t, r_t><r_s, r_s>) <= " + fmt(o.jacobi_tolerance) +
                     " for t != s in 1.." + std::to_string(o.jacobi_max_degree));
  double worst = 0.0;
  int wt = 0, ws = 0;
  std::vector<double> diag(o.jacobi_max_degree + 1);
  for (int t = 1; t <= o.jacobi_max_degree; ++t)
    diag[t] = filters::jacobi_orthogonality(o.jacobi_nu, t, t);
  for (int t = 1; t <= o.jacobi_max_degree; ++t)
    for (int s = t + 1; s <= o.jacobi_max_degree; ++s) {
      const double v =
          std::abs(filters::jacobi_orthogonality(o.jacobi_nu, t, s)) / std::sqrt(diag[t] * diag[s]);
      if (v > worst || wt == 0) {
        worst = v;
        wt = t;
        ws = s;
      }
    }
  r.worst_margin = worst - o.jacobi_tolerance;
  r.status = r.worst_margin <= 0.0 ? Status::Pass : Status::Fail;
  r.location = "t=" + std::to_string(wt) + " s=" + std::to_string(ws) + " value=" + fmt(worst);
  out.push_back(r);
}

}  // namespace

void Options::validate() const {
  auto fail = [](const std::string& what) { throw DomainError("verify: " + what); };
  if (!(kappa2 > 0.0) || !std::isfinite(kappa2)) fail("kappa2 must be > 0");
  if (grid_points < 2) fail("grid_points must be >= 2");
  if (!(sigma_min > 0.0) || !(sigma_min < kappa2)) fail("sigma_min must lie in (0, kappa2)");
  if (iterations < 1 || iterations > filters::kMaxIterations) fail("iterations out of range");
  if (!(gd_step_scale > 0.0) || !std::isfinite(gd_step_scale)) fail("gd_step_scale must be > 0");
  if (!(nesterov_step_scale > 0.0) || !(nesterov_step_scale < 1.0))
    fail("nesterov_step_scale must lie in (0, 1)");
  if (!(beta >= 1.0)) fail("beta must be >= 1");
  if (!(nu > 0.0)) fail("nu must be > 0");
  for (double v : slope_nus)
    if (!(v > 0.0)) fail("slope nus must be > 0");
  if (slope_t_min < 1 || slope_t_max < 2 * slope_t_min) fail("slope window needs t_max >= 2 t_min >= 2");
  if (!(jacobi_nu > 0.0)) fail("jacobi_nu must be > 0");
  if (jacobi_max_degree < 2) fail("jacobi_max_degree must be >= 2");
}

std::vector<CheckResult> run_suite(const Options& o) {
  o.validate();
  const auto base = filters::log_grid(o.sigma_min, o.kappa2, o.grid_points);
  const double gd_alpha = o.gd_step_scale / o.kappa2;
  const std::vector<double> qs{0.5, 1.0, 2.0};
  const auto grid =
      filters::merge_grids(base, filters::gd_maximizers(gd_alpha, qs, o.iterations, o.sigma_min, o.kappa2));

  std::vector<CheckResult> out;
  pointwise_checks(o, FilterMethod::gradient_descent(gd_alpha, o.kappa2, Checks::Skip), grid, out);
  pointwise_checks(o, FilterMethod::nu_method(o.nu, o.kappa2), grid, out);
  pointwise_checks(o, FilterMethod::nesterov(o.nesterov_step_scale / o.kappa2, o.beta, o.kappa2), grid,
                   out);
  nesterov_aux_checks(o, base, out);
  nu_slope_checks(o, base, out);
  jacobi_checks(o, out);
  return out;
}

bool all_passed(const std::vector<CheckResult>& results) {
  return std::none_of(results.begin(), results.end(),
                      [](const CheckResult& r) { return r.status == Status::Fail; });
}

std::string format_report(const std::vector<CheckResult>& results) {
  std::ostringstream out;
  int failed = 0, skipped_count = 0;
  for (const auto& r : results) {
    const char* status = r.status == Status::Pass ? "PASS" : r.status == Status::Fail ? "FAIL" : "SKIP";
    failed += r.status == Status::Fail;
    skipped_count += r.status == Status::Skip;
    std::string name = r.name;
    name.resize(std::max<std::size_t>(name.size(), 34), ' ');
    out << status << "  " << name << " worst_margin=" << fmt(r.worst_margin) << "  at " << r.location
        << "  bound: " << r.bound << "\n";
  }
  out << results.size() << " checks, " << failed << " failed, " << skipped_count << " skipped\n";
  return out.str();
}

}  // namespace accelreg::verify
