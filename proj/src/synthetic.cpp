#include "accelreg/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include <Eigen/Householder>

#include "accelreg/errors.hpp"

namespace accelreg::synthetic {

namespace {

enum StreamTag : std::uint32_t { kReflectors = 1, kSource = 2, kNoise = 3, kIndices = 4 };

std::mt19937_64 make_stream(std::uint64_t seed, StreamTag tag) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(tag)};
  return std::mt19937_64(seq);
}

void validate(const ProblemSpec& spec) {
  if (spec.size < 2) throw DomainError("synthetic problem: N must be >= 2");
  if (spec.size > kMaxDomainSize) {
    std::ostringstream msg;
    msg << "synthetic problem: N=" << spec.size << " exceeds the resource limit " << kMaxDomainSize;
    throw DomainError(msg.str());
  }
  if (!(spec.gamma >= 1.0) || !std::isfinite(spec.gamma))
    throw DomainError("synthetic problem: gamma must be >= 1");
  if (!(spec.source >= 0.0) || !std::isfinite(spec.source))
    throw DomainError("synthetic problem: source exponent r must be >= 0");
  if (!(spec.noise >= 0.0) || !std::isfinite(spec.noise))
    throw DomainError("synthetic problem: noise level must be >= 0");
  if (spec.reflectors < 0 || spec.reflectors > spec.size)
    throw DomainError("synthetic problem: reflector count must be in [0, N]");
}

using Reflectors = Eigen::HouseholderSequence<Eigen::MatrixXd, Eigen::VectorXd>;

}  // namespace

void SyntheticProblem::init_operator(const ProblemSpec& spec) {
  validate(spec);
  spec_ = spec;
  const int n = spec.size;
  const int h = spec.reflectors > 0 ? spec.reflectors : std::min(n, 200);
  spec_.reflectors = h;

  auto rng = make_stream(spec.seed, kReflectors);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd gauss(n, h);
  for (Eigen::Index j = 0; j < h; ++j)
    for (Eigen::Index i = 0; i < n; ++i) gauss(i, j) = normal(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gauss);
  householder_ = qr.matrixQR();
  householder_coeffs_ = qr.hCoeffs();

  spectrum_.resize(n);
  for (int i = 0; i < n; ++i) spectrum_(i) = std::pow(i + 1.0, -spec.gamma);
}

void SyntheticProblem::set_source(const Eigen::VectorXd& coeffs, const Eigen::VectorXd* exact) {
  if (coeffs.size() != size()) throw DomainError("synthetic problem: source length must equal N");
  source_coeffs_ = coeffs;
  source_ = exact ? *exact : Eigen::VectorXd(apply_u(coeffs));
  if (spec_.source == 0.0) {
    target_coeffs_ = source_coeffs_;
    target_ = source_;
  } else {
    target_coeffs_ = spectrum_.array().pow(spec_.source) * source_coeffs_.array();
    target_ = apply_u(target_coeffs_);
  }
  labels_ = target_;
  if (spec_.noise > 0.0) {
    auto rng = make_stream(spec_.seed, kNoise);
    std::normal_distribution<double> normal(0.0, spec_.noise);
    for (Eigen::Index i = 0; i < labels_.size(); ++i) labels_(i) += normal(rng);
  }
}

Eigen::MatrixXd SyntheticProblem::apply_u(Eigen::MatrixXd x) const {
  const Reflectors u(householder_, householder_coeffs_);
  u.applyThisOnTheLeft(x);
  return x;
}

Eigen::MatrixXd SyntheticProblem::apply_ut(Eigen::MatrixXd x) const {
  const Reflectors u(householder_, householder_coeffs_);
  u.transpose().applyThisOnTheLeft(x);
  return x;
}

SyntheticProblem generate_problem(const ProblemSpec& spec) {
  SyntheticProblem p;
  p.init_operator(spec);
  auto rng = make_stream(spec.seed, kSource);
  std::normal_distribution<double> normal;
  Eigen::VectorXd g0(spec.size);
  for (Eigen::Index i = 0; i < g0.size(); ++i) g0(i) = normal(rng);
  g0 *= std::sqrt(static_cast<double>(spec.size)) / g0.norm();
  p.set_source(p.apply_ut(g0), &g0);
  return p;
}

SyntheticProblem SyntheticProblem::from_coefficients(const ProblemSpec& spec,
                                                     const Eigen::VectorXd& source_coefficients) {
  SyntheticProblem p;
  p.init_operator(spec);
  p.set_source(source_coefficients, nullptr);
  return p;
}

Sample draw_sample(const SyntheticProblem& problem, int n, std::uint64_t seed, Replacement mode) {
  const int domain = problem.size();
  if (n < 1 || n > domain) {
    std::ostringstream msg;
    msg << "draw_sample: n=" << n << " must lie in [1, N=" << domain << "]";
    throw DomainError(msg.str());
  }
  auto rng = make_stream(seed, kIndices);
  Sample s;
  s.indices.resize(n);
  if (mode == Replacement::With) {
    std::uniform_int_distribution<int> pick(0, domain - 1);
    for (int& idx : s.indices) idx = pick(rng);
  } else {
    std::vector<int> all(domain);
    std::iota(all.begin(), all.end(), 0);
    std::shuffle(all.begin(), all.end(), rng);
    std::copy_n(all.begin(), n, s.indices.begin());
  }

  Eigen::MatrixXd selector = Eigen::MatrixXd::Zero(domain, n);
  for (int j = 0; j < n; ++j) selector(s.indices[j], j) = 1.0;
  s.coordinates = problem.apply_ut(std::move(selector));

  const double scale = static_cast<double>(domain);
  const Eigen::MatrixXd weighted = problem.spectrum().asDiagonal() * s.coordinates;
  s.kernel = scale * (s.coordinates.transpose() * weighted);
  s.kernel = 0.5 * (s.kernel + s.kernel.transpose()).eval();
  s.op = s.kernel / static_cast<double>(n);
  s.kappa2 = s.kernel.diagonal().maxCoeff();

  s.labels.resize(n);
  for (int j = 0; j < n; ++j) s.labels(j) = problem.labels()(s.indices[j]);
  return s;
}

Eigen::VectorXd predict_domain(const SyntheticProblem& problem, const Sample& sample,
                               const Eigen::VectorXd& u) {
  if (u.size() != static_cast<Eigen::Index>(sample.indices.size()))
    throw DomainError("predict_domain: coefficient length does not match the sample");
  const double scale = static_cast<double>(problem.size()) / static_cast<double>(u.size());
  const Eigen::VectorXd coeffs =
      scale * (problem.spectrum().array() * (sample.coordinates * u).array()).matrix();
  return problem.apply_u(coeffs);
}

double excess_risk(const Eigen::VectorXd& estimate, const SyntheticProblem& problem) {
  if (estimate.size() != problem.size()) throw DomainError("excess_risk: estimate length must equal N");
  return (estimate - problem.target()).squaredNorm() / static_cast<double>(problem.size());
}

double weighted_error(const Eigen::VectorXd& estimate, const SyntheticProblem& problem, double a) {
  if (estimate.size() != problem.size()) throw DomainError("weighted_error: estimate length must equal N");
  if (!(a >= 0.0) || a > 0.5) throw DomainError("weighted_error: a must lie in [0, 1/2]");
  const Eigen::VectorXd diff = problem.apply_ut(estimate - problem.target());
  double sum = 0.0;
  for (Eigen::Index i = 0; i < diff.size(); ++i)
    sum += std::pow(problem.spectrum()(i), -2.0 * a) * diff(i) * diff(i);
  return sum / static_cast<double>(problem.size());
}

std::vector<double> population_bias(const SyntheticProblem& problem,
                                    const filters::FilterMethod& method, int iterations) {
  if (iterations < 0 || iterations > filters::kMaxIterations)
    throw DomainError("population_bias: iteration count out of range");
  if (method.kappa2() < problem.spectrum().maxCoeff())
    throw DomainError("population_bias: kappa2 must bound the operator spectrum (>= 1)");
  const auto& d = problem.spectrum();
  const auto& c = problem.target_coefficients();
  const std::vector<double> sigma(d.data(), d.data() + d.size());
  filters::FilterRecurrence rec(method, sigma);
  const double inv = 1.0 / static_cast<double>(problem.size());
  std::vector<double> bias;
  bias.reserve(iterations + 1);
  for (int t = 0;; ++t) {
    double sum = 0.0;
    const auto r = rec.r();
    for (Eigen::Index i = 0; i < d.size(); ++i) sum += r[i] * r[i] * c(i) * c(i);
    bias.push_back(sum * inv);
    if (t == iterations) break;
    rec.advance();
  }
  return bias;
}

RiskEvaluator::RiskEvaluator(const SyntheticProblem& problem, const Sample& sample) {
  const double n = static_cast<double>(sample.indices.size());
  const double scale = static_cast<double>(problem.size()) / n;
  // Risk = (1/N) |scale D V u - c|^2 in eigen-coordinates (U is orthogonal).
  const Eigen::MatrixXd dv = scale * (problem.spectrum().asDiagonal() * sample.coordinates);
  quadratic_ = dv.transpose() * dv;
  linear_ = dv.transpose() * problem.target_coefficients();
  constant_ = problem.target_coefficients().squaredNorm();
  inv_size_ = 1.0 / static_cast<double>(problem.size());
}

double RiskEvaluator::operator()(const Eigen::VectorXd& u) const {
  const double value = (u.dot(quadratic_ * u) - 2.0 * u.dot(linear_) + constant_) * inv_size_;
  return std::max(value, 0.0);
}

}  // namespace accelreg::synthetic
