#include "accelreg/filters.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "accelreg/errors.hpp"
#include "accelreg/quadrature.hpp"
#include "loglog.hpp"

namespace accelreg::filters {

namespace {

constexpr double kDomainSlack = 1e-12;

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    std::ostringstream msg;
    msg << what << " must be a finite positive number, got " << value;
    throw DomainError(msg.str());
  }
}

}  // namespace

FilterMethod FilterMethod::gradient_descent(double step, double kappa2,
                                            Checks checks) {
  require_positive(step, "gradient descent step");
  require_positive(kappa2, "kappa2");
  if (checks == Checks::Enforce && step * kappa2 > 1.0 + kDomainSlack) {
    std::ostringstream msg;
    msg << "gradient descent needs step * kappa2 <= 1, got " << step * kappa2;
    throw DomainError(msg.str());
  }
  return FilterMethod(GradientDescent{step}, kappa2);
}

FilterMethod FilterMethod::nu_method(double nu, double kappa2) {
  require_positive(nu, "nu");
  require_positive(kappa2, "kappa2");
  return FilterMethod(NuMethod{nu}, kappa2);
}

FilterMethod FilterMethod::nesterov(double step, double beta, double kappa2,
                                    Checks checks) {
  require_positive(step, "Nesterov step");
  require_positive(kappa2, "kappa2");
  if (!(beta >= 1.0) || !std::isfinite(beta))
    throw DomainError("Nesterov momentum parameter beta must be >= 1");
  if (checks == Checks::Enforce && !(step * kappa2 < 1.0)) {
    std::ostringstream msg;
    msg << "Nesterov acceleration needs step * kappa2 < 1, got " << step * kappa2;
    throw DomainError(msg.str());
  }
  return FilterMethod(Nesterov{step, beta}, kappa2);
}

MethodKind FilterMethod::kind() const {
  switch (params_.index()) {
    case 0: return MethodKind::GradientDescent;
    case 1: return MethodKind::NuMethod;
    default: return MethodKind::Nesterov;
  }
}

bool FilterMethod::bound_constants_apply() const {
  return kind() != MethodKind::NuMethod || kappa2_ <= 1.0 + kDomainSlack;
}

double FilterMethod::lambda(int t) const {
  if (t <= 0) return 1.0;
  const double td = t;
  return accelerated() ? 1.0 / (td * td) : 1.0 / td;
}

double FilterMethod::g_bound(int t) const {
  const double td = t;
  if (const auto* gd = std::get_if<GradientDescent>(&params_)) return gd->step * td;
  if (const auto* nest = std::get_if<Nesterov>(&params_)) return 2.0 * nest->step * td * td;
  return 2.0 * td * td / kappa2_;
}

std::string_view FilterMethod::label() const {
  switch (kind()) {
    case MethodKind::GradientDescent: return "gd";
    case MethodKind::NuMethod: return "nu";
    case MethodKind::Nesterov: return "nesterov";
  }
  return "unknown";
}

StepParams nu_params(int t, double nu, double kappa2) {
  if (t < 1) throw DomainError("nu_params: iteration index must be >= 1");
  require_positive(nu, "nu");
  require_positive(kappa2, "kappa2");
  if (t == 1) return {(4.0 * nu + 2.0) / ((4.0 * nu + 1.0) * kappa2), 0.0};
  const double td = t;
  const double step = 4.0 / kappa2 * (2.0 * td + 2.0 * nu - 1.0) * (td + nu - 1.0) /
                      ((td + 2.0 * nu - 1.0) * (2.0 * td + 4.0 * nu - 1.0));
  const double momentum = (td - 1.0) * (2.0 * td - 3.0) * (2.0 * td + 2.0 * nu - 1.0) /
                          ((td + 2.0 * nu - 1.0) * (2.0 * td + 4.0 * nu - 1.0) *
                           (2.0 * td + 2.0 * nu - 3.0));
  return {step, momentum};
}

double nesterov_beta(int t, double beta) {
  if (!(beta >= 1.0)) throw DomainError("nesterov_beta: beta must be >= 1");
  if (t < 1) throw DomainError("nesterov_beta: iteration index must be >= 1");
  return (t - 1.0) / (t + beta);
}

FilterRecurrence::FilterRecurrence(const FilterMethod& method,
                                   std::span<const double> sigma)
    : method_(method),
      sigma_(sigma.begin(), sigma.end()),
      g_(sigma.size(), 0.0),
      r_(sigma.size(), 1.0),
      g_prev_(sigma.size(), 0.0),
      r_prev_(sigma.size(), 1.0) {}

void FilterRecurrence::advance() {
  const std::size_t m = sigma_.size();
  const int t = t_;
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, GradientDescent>) {
          for (std::size_t i = 0; i < m; ++i) {
            const double damp = 1.0 - p.step * sigma_[i];
            g_prev_[i] = g_[i];
            r_prev_[i] = r_[i];
            g_[i] = g_prev_[i] + p.step * r_prev_[i];
            r_[i] = damp * r_prev_[i];
          }
        } else if constexpr (std::is_same_v<P, NuMethod>) {
          const auto [step, momentum] = nu_params(t + 1, p.nu, method_.kappa2());
          for (std::size_t i = 0; i < m; ++i) {
            const double g_next =
                g_[i] + step * r_[i] + momentum * (g_[i] - g_prev_[i]);
            const double r_next = r_[i] + momentum * (r_[i] - r_prev_[i]) -
                                  step * sigma_[i] * r_[i];
            g_prev_[i] = g_[i];
            r_prev_[i] = r_[i];
            g_[i] = g_next;
            r_[i] = r_next;
          }
        } else {
          // beta_0 multiplies r_0 - r_{-1} = 0, so its value is irrelevant.
          const double momentum = t == 0 ? 0.0 : nesterov_beta(t, p.beta);
          for (std::size_t i = 0; i < m; ++i) {
            const double damp = 1.0 - p.step * sigma_[i];
            const double g_next = damp * (g_[i] + momentum * (g_[i] - g_prev_[i])) + p.step;
            const double r_next = damp * (r_[i] + momentum * (r_[i] - r_prev_[i]));
            g_prev_[i] = g_[i];
            r_prev_[i] = r_[i];
            g_[i] = g_next;
            r_[i] = r_next;
          }
        }
      },
      method_.params());
  ++t_;
  for (std::size_t i = 0; i < m; ++i) {
    if (!std::isfinite(g_[i]) || !std::isfinite(r_[i])) {
      std::ostringstream msg;
      msg << method_.label() << " filter overflow at t=" << t_
          << ", sigma=" << sigma_[i];
      throw NumericError(msg.str());
    }
  }
}

void FilterRecurrence::advance_to(int t) {
  while (t_ < t) advance();
}

FilterTrace filter_trace(const FilterMethod& method,
                         std::span<const double> sigma_grid, int iterations) {
  if (iterations < 1 || iterations > kMaxIterations)
    throw DomainError("filter_trace: iteration count must be in [1, 1e6]");
  if (sigma_grid.empty()) throw DomainError("filter_trace: empty sigma grid");
  const double upper = method.kappa2() * (1.0 + kDomainSlack);
  for (std::size_t i = 0; i < sigma_grid.size(); ++i) {
    const double s = sigma_grid[i];
    if (!(s > 0.0) || !(s <= upper)) {
      std::ostringstream msg;
      msg << "filter_trace: sigma=" << s << " outside (0, kappa2=" << method.kappa2() << "]";
      throw DomainError(msg.str());
    }
    if (i > 0 && !(s > sigma_grid[i - 1]))
      throw DomainError("filter_trace: sigma grid must be strictly increasing");
  }

  FilterTrace trace;
  trace.sigma.assign(sigma_grid.begin(), sigma_grid.end());
  trace.g.reserve(iterations + 1);
  trace.r.reserve(iterations + 1);
  FilterRecurrence rec(method, sigma_grid);
  for (int t = 0;; ++t) {
    trace.g.emplace_back(rec.g().begin(), rec.g().end());
    trace.r.emplace_back(rec.r().begin(), rec.r().end());
    trace.lambda.push_back(method.lambda(t));
    if (t == iterations) break;
    rec.advance();
  }
  return trace;
}

std::vector<double> log_grid(double lo, double hi, int points) {
  if (!(lo > 0.0) || !(hi > lo) || points < 2)
    throw DomainError("log_grid: need 0 < lo < hi and at least two points");
  std::vector<double> grid(points);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < points; ++i)
    grid[i] = std::exp(llo + (lhi - llo) * i / (points - 1));
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

std::vector<double> gd_maximizers(double step, std::span<const double> qs,
                                  int iterations, double lo, double hi) {
  std::vector<double> nodes;
  for (double q : qs) {
    if (!(q > 0.0)) continue;
    for (int t = 1; t <= iterations; ++t) {
      const double s = q / (step * (t + q));
      if (s > lo && s <= hi) nodes.push_back(s);
    }
  }
  return nodes;
}

std::vector<double> merge_grids(std::span<const double> a,
                                std::span<const double> b) {
  std::vector<double> out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<double> qualification_sup(const FilterTrace& trace, double q) {
  if (!(q >= 0.0)) throw DomainError("qualification_sup: q must be >= 0");
  std::vector<double> weight(trace.sigma.size());
  for (std::size_t i = 0; i < weight.size(); ++i)
    weight[i] = q == 0.0 ? 1.0 : std::pow(trace.sigma[i], q);
  std::vector<double> sup(trace.r.size(), 0.0);
  for (std::size_t t = 0; t < trace.r.size(); ++t) {
    double best = 0.0;
    for (std::size_t i = 0; i < weight.size(); ++i)
      best = std::max(best, weight[i] * std::abs(trace.r[t][i]));
    sup[t] = best;
  }
  return sup;
}

double qualification_slope(std::span<const double> s, int t_min, int t_max) {
  if (t_min < 1 || t_max < 2 * t_min)
    throw DomainError("qualification_slope: need 1 <= t_min and t_max >= 2 t_min");
  if (static_cast<std::size_t>(t_max) >= s.size())
    throw DomainError("qualification_slope: window exceeds the available iterations");
  std::vector<double> ts, vals;
  for (int t = t_min; t <= t_max; ++t) {
    if (!(s[t] > 0.0)) {
      std::ostringstream msg;
      msg << "qualification_slope: non-positive value " << s[t] << " at t=" << t;
      throw DomainError(msg.str());
    }
    ts.push_back(t);
    vals.push_back(s[t]);
  }
  return detail::loglog_slope(ts, vals);
}

NesterovAuxiliary nesterov_auxiliary(std::span<const double> sigma_grid,
                                     int iterations, double step, double beta,
                                     double kappa2) {
  const auto method = FilterMethod::nesterov(step, beta, kappa2);
  if (iterations < 1 || iterations > kMaxIterations)
    throw DomainError("nesterov_auxiliary: iteration count must be in [1, 1e6]");
  for (double s : sigma_grid)
    if (!(s > 0.0) || !(s <= kappa2 * (1.0 + kDomainSlack)))
      throw DomainError("nesterov_auxiliary: sigma outside (0, kappa2]");

  const std::size_t m = sigma_grid.size();
  const auto theta = [beta](int t) { return beta / (t + beta); };
  NesterovAuxiliary aux;
  aux.R.reserve(iterations + 1);
  aux.margin.reserve(iterations + 1);
  aux.R.emplace_back(m, 1.0);
  aux.margin.emplace_back(m, -std::numeric_limits<double>::infinity());
  aux.max_abs_R = 1.0;
  aux.max_margin = -std::numeric_limits<double>::infinity();
  if (m > 0) aux.max_abs_R_at = {0, sigma_grid[0]};

  FilterRecurrence rec(method, sigma_grid);
  std::vector<double> R(m, 1.0);
  for (int t = 0; t < iterations; ++t) {
    const double th = theta(t);
    for (std::size_t i = 0; i < m; ++i) {
      const double as = step * sigma_grid[i];
      R[i] = -(as / th) * (1.0 - th) * rec.r()[i] + (1.0 - as) * R[i];
    }
    rec.advance();
    const int tn = t + 1;
    const double th_prev = theta(tn - 1);
    std::vector<double> margin(m);
    for (std::size_t i = 0; i < m; ++i) {
      const double s = sigma_grid[i];
      const double r = rec.r()[i];
      margin[i] = s * r * r - th_prev * th_prev / step * std::pow(1.0 - step * s, tn + 1);
      if (std::abs(R[i]) > aux.max_abs_R) {
        aux.max_abs_R = std::abs(R[i]);
        aux.max_abs_R_at = {tn, s};
      }
      if (margin[i] > aux.max_margin) {
        aux.max_margin = margin[i];
        aux.max_margin_at = {tn, s};
      }
    }
    aux.R.push_back(R);
    aux.margin.push_back(std::move(margin));
  }
  return aux;
}

namespace {

double nu_residual(double nu, int t, double sigma) {
  const double point[1] = {sigma};
  FilterRecurrence rec(FilterMethod::nu_method(nu, 1.0), point);
  rec.advance_to(t);
  return rec.r()[0];
}

}  // namespace

double jacobi_orthogonality(double nu, int t, int s, int nodes) {
  if (!(nu > 0.0)) throw DomainError("jacobi_orthogonality: nu must be > 0");
  if (t < 0 || s < 0) throw DomainError("jacobi_orthogonality: degrees must be >= 0");
  const double delta = 1e-3;
  const double tol = 1e-12;
  const double exponent = 2.0 * nu - 0.5;
  const auto rule = quadrature::gauss_legendre(nodes);

  const auto interior = [&](double x) {
    return nu_residual(nu, t, x) * nu_residual(nu, s, x) * std::pow(x, exponent) /
           std::sqrt(1.0 - x);
  };
  // 1 - x = u^2 removes the inverse square-root singularity at x = 1.
  const auto endpoint = [&](double u) {
    const double x = 1.0 - u * u;
    return 2.0 * nu_residual(nu, t, x) * nu_residual(nu, s, x) * std::pow(x, exponent);
  };
  const auto left = quadrature::integrate(interior, 0.0, 1.0 - delta, rule, tol, 60);
  const auto right = quadrature::integrate(endpoint, 0.0, std::sqrt(delta), rule, tol, 60);
  return left.value + right.value;
}

double jacobi_normalized(double nu, int t, int s, int nodes) {
  const double cross = jacobi_orthogonality(nu, t, s, nodes);
  const double tt = jacobi_orthogonality(nu, t, t, nodes);
  const double ss = jacobi_orthogonality(nu, s, s, nodes);
  return cross / std::sqrt(tt * ss);
}

}  // namespace accelreg::filters
