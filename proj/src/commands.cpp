#include "accelreg/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "accelreg/csv.hpp"
#include "accelreg/dataset.hpp"
#include "accelreg/errors.hpp"
#include "accelreg/experiments.hpp"
#include "accelreg/filters.hpp"
#include "accelreg/kernels.hpp"
#include "accelreg/solvers.hpp"
#include "accelreg/svg.hpp"
#include "accelreg/verify.hpp"

namespace accelreg::commands {

namespace {

constexpr KeyInfo kVerifyKeys[] = {
    {"kappa2", "upper end of the sigma grid (default 1)"},
    {"grid_points", "log-spaced grid size (default 512)"},
    {"sigma_min", "lower end of the sigma grid (default 1e-8)"},
    {"iterations", "largest t checked (default 2000)"},
    {"gd_step_scale", "gradient descent step times kappa2 (default 1)"},
    {"nesterov_step_scale", "Nesterov step times kappa2 (default 0.99)"},
    {"beta", "Nesterov momentum parameter (default 1)"},
    {"nu", "nu-method parameter for the pointwise checks (default 1)"},
    {"slope_nus", "nu values for the qualification slope check (default 1,2)"},
    {"slope_t_min", "slope window start (default 50)"},
    {"slope_t_max", "slope window end (default 500)"},
    {"jacobi_max_degree", "largest residual degree in the orthogonality check (default 6)"},
    {"report", "report path or - (default -)"},
};

constexpr KeyInfo kFiltersKeys[] = {
    {"methods", "comma-separated subset of gd,nu,nesterov (default all)"},
    {"iterations", "largest t (default 20)"},
    {"kappa2", "upper end of the sigma grid (default 1)"},
    {"grid_points", "log-spaced grid size (default 64)"},
    {"sigma_min", "lower end of the sigma grid (default 1e-8)"},
    {"sigma_grid", "explicit comma-separated sigma values, replaces the log grid"},
    {"gd_step_scale", "gradient descent step times kappa2 (default 1)"},
    {"nesterov_step_scale", "Nesterov step times kappa2 (default 0.99)"},
    {"beta", "Nesterov momentum parameter (default 1)"},
    {"nu", "nu-method parameter (default 1)"},
    {"output", "CSV path or - (default -)"},
};

constexpr KeyInfo kSimulateKeys[] = {
    {"domain_size", "N (default 2000)"},
    {"sample_size", "n (default 100)"},
    {"gamma", "spectrum decay (default 1)"},
    {"source", "source exponent r (default 0.5)"},
    {"noise", "label noise standard deviation (default 0.5)"},
    {"iterations", "T, 0 for 20 times the largest stopping rule (default 0)"},
    {"rule_multiplier", "constant of the stopping rules (default 1)"},
    {"repetitions", "number of repetitions (default 50)"},
    {"methods", "comma-separated subset of gd,nu,nesterov (default all)"},
    {"gd_step_scale", "gradient descent step times kappa2 (default 1)"},
    {"nesterov_step_scale", "Nesterov step times kappa2 (default 0.99)"},
    {"beta", "Nesterov momentum parameter (default 1)"},
    {"nu", "nu-method parameter (default 1)"},
    {"seed", "master seed (default 0)"},
    {"threads", "worker threads, 0 for all cores (default 0)"},
    {"output", "CSV path or - (required)"},
    {"svg", "optional SVG chart path"},
};

constexpr KeyInfo kFitKeys[] = {
    {"data", "dataset path, target in the last column (required)"},
    {"delimiter", "auto, comma, semicolon, tab or space (default auto)"},
    {"skip_header", "skip the first non-empty line (default false)"},
    {"kernel", "gaussian, polynomial or linear (default gaussian)"},
    {"width", "Gaussian kernel width (default 1.2)"},
    {"degree", "polynomial kernel degree (default 9)"},
    {"offset", "polynomial kernel offset (default 1)"},
    {"train_size", "rows used for training (default 1000)"},
    {"iterations", "T (default 500)"},
    {"methods", "comma-separated subset of gd,nu,nesterov (default all)"},
    {"gd_step_scale", "gradient descent step times kappa2 (default 1)"},
    {"nesterov_step_scale", "Nesterov step times kappa2 (default 0.99)"},
    {"beta", "Nesterov momentum parameter (default 1)"},
    {"nu", "nu-method parameter (default 1)"},
    {"seed", "split seed (default 0)"},
    {"output", "CSV path or - (required)"},
    {"svg", "optional SVG chart path"},
};

void check_keys(const RunConfig& config, std::span<const KeyInfo> keys) {
  std::vector<std::string_view> names;
  for (const auto& k : keys) names.push_back(k.key);
  config.require_known(names);
}

std::string required(const RunConfig& config, const std::string& key) {
  const auto v = config.get_string(key, "");
  if (v.empty()) throw DomainError("missing required setting '" + key + "'");
  return v;
}

std::vector<experiments::MethodSpec> method_specs(const RunConfig& config) {
  const auto names = config.get_list("methods", {"gd", "nu", "nesterov"});
  if (names.empty()) throw DomainError("methods: at least one method is required");
  const double gd_scale = config.get_double("gd_step_scale", 1.0);
  const double nest_scale = config.get_double("nesterov_step_scale", 0.99);
  const double beta = config.get_double("beta", 1.0);
  const double nu = config.get_double("nu", 1.0);
  std::vector<experiments::MethodSpec> specs;
  std::set<std::string> seen;
  for (const auto& name : names) {
    if (!seen.insert(name).second) throw DomainError("methods: duplicate entry '" + name + "'");
    if (name == "gd")
      specs.push_back(experiments::MethodSpec::gd(gd_scale));
    else if (name == "nu")
      specs.push_back(experiments::MethodSpec::nu_method(nu));
    else if (name == "nesterov")
      specs.push_back(experiments::MethodSpec::nesterov(nest_scale, beta));
    else
      throw DomainError("methods: unknown method '" + name + "' (expected gd, nu or nesterov)");
  }
  for (const auto& s : specs) (void)s.instantiate(1.0);
  return specs;
}

std::string format_int(long long v) { return std::to_string(v); }

void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path == "-") {
    out << content;
    out.flush();
  } else {
    csv::write_file(path, content);
  }
}

std::ostream& summary_stream(const std::string& output, std::ostream& out, std::ostream& log) {
  return output == "-" ? log : out;
}

}  // namespace

std::span<const KeyInfo> verify_keys() { return kVerifyKeys; }
std::span<const KeyInfo> filters_keys() { return kFiltersKeys; }
std::span<const KeyInfo> simulate_keys() { return kSimulateKeys; }
std::span<const KeyInfo> fit_keys() { return kFitKeys; }

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& /*log*/) {
  check_keys(config, kVerifyKeys);
  verify::Options o;
  o.kappa2 = config.get_double("kappa2", o.kappa2);
  o.grid_points = config.get_int("grid_points", o.grid_points);
  o.sigma_min = config.get_double("sigma_min", o.sigma_min);
  o.iterations = config.get_int("iterations", o.iterations);
  o.gd_step_scale = config.get_double("gd_step_scale", o.gd_step_scale);
  o.nesterov_step_scale = config.get_double("nesterov_step_scale", o.nesterov_step_scale);
  o.beta = config.get_double("beta", o.beta);
  o.nu = config.get_double("nu", o.nu);
  o.slope_nus = config.get_double_list("slope_nus", o.slope_nus);
  o.slope_t_min = config.get_int("slope_t_min", o.slope_t_min);
  o.slope_t_max = config.get_int("slope_t_max", o.slope_t_max);
  o.jacobi_max_degree = config.get_int("jacobi_max_degree", o.jacobi_max_degree);
  const auto report_path = config.get_string("report", "-");
  o.validate();

  const auto results = verify::run_suite(o);
  const auto report = verify::format_report(results);
  emit(report_path, report, out);
  const bool ok = verify::all_passed(results);
  if (report_path != "-") out << (ok ? "all checks passed" : "some checks FAILED") << "\n";
  return ok ? kOk : kCheckFailed;
}

int cmd_filters(const RunConfig& config, std::ostream& out, std::ostream& /*log*/) {
  check_keys(config, kFiltersKeys);
  const int iterations = config.get_int("iterations", 20);
  const double kappa2 = config.get_double("kappa2", 1.0);
  const auto specs = method_specs(config);
  const auto output = config.get_string("output", "-");
  std::vector<double> grid;
  if (config.has("sigma_grid")) {
    grid = config.get_double_list("sigma_grid", {});
    std::sort(grid.begin(), grid.end());
  } else {
    grid = filters::log_grid(config.get_double("sigma_min", 1e-8), kappa2,
                             config.get_int("grid_points", 64));
  }

  csv::Table table({"method", "t", "sigma", "g", "r"});
  for (const auto& spec : specs) {
    const auto method = spec.instantiate(kappa2);
    const auto trace = filters::filter_trace(method, grid, iterations);
    const std::string label(method.label());
    for (int t = 0; t <= iterations; ++t)
      for (std::size_t i = 0; i < grid.size(); ++i)
        table.add_row({label, format_int(t), csv::format(grid[i]), csv::format(trace.g[t][i]),
                       csv::format(trace.r[t][i])});
  }
  emit(output, table.text(), out);
  if (output != "-") out << "wrote " << table.rows() << " rows to " << output << "\n";
  return kOk;
}

int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& log) {
  check_keys(config, kSimulateKeys);
  experiments::SimulationConfig sim;
  sim.domain_size = config.get_int("domain_size", sim.domain_size);
  sim.sample_size = config.get_int("sample_size", sim.sample_size);
  sim.gamma = config.get_double("gamma", sim.gamma);
  sim.source = config.get_double("source", sim.source);
  sim.noise = config.get_double("noise", sim.noise);
  sim.iterations = config.get_int("iterations", sim.iterations);
  sim.rule_multiplier = config.get_double("rule_multiplier", sim.rule_multiplier);
  sim.repetitions = config.get_int("repetitions", sim.repetitions);
  sim.methods = method_specs(config);
  sim.master_seed = config.get_uint64("seed", sim.master_seed);
  sim.threads = config.get_int("threads", sim.threads);
  const auto output = required(config, "output");
  const auto svg_path = config.get_string("svg", "");
  sim.validate();

  const auto curves = experiments::run_simulation(sim);
  csv::Table table({"method", "t", "mean_error", "var_error", "is_min"});
  std::vector<svg::Series> series;
  for (const auto& c : curves) {
    svg::Series s{c.label, {}, {}, c.argmin_t - 1};
    for (int t = 1; t <= c.iterations(); ++t) {
      table.add_row({c.label, format_int(t), csv::format(c.mean[t - 1]), csv::format(c.var[t - 1]),
                     t == c.argmin_t ? "1" : "0"});
      s.x.push_back(t);
      s.y.push_back(c.mean[t - 1]);
    }
    series.push_back(std::move(s));
  }
  emit(output, table.text(), out);
  if (!svg_path.empty())
    csv::write_file(svg_path, svg::loglog_chart(series, "iteration t", "mean excess risk"));

  auto& summary = summary_stream(output, out, log);
  for (std::size_t m = 0; m < curves.size(); ++m) {
    const bool acc = sim.methods[m].kind != filters::MethodKind::GradientDescent;
    summary << curves[m].label << ": argmin_t=" << curves[m].argmin_t
            << " min_mean=" << csv::format(curves[m].min_mean()) << " stopping_rule="
            << experiments::stopping_rule(sim.sample_size, sim.gamma, sim.source, acc,
                                          sim.source >= 0.5, sim.rule_multiplier)
            << "\n";
  }
  return kOk;
}

int cmd_fit(const RunConfig& config, std::ostream& out, std::ostream& log) {
  check_keys(config, kFitKeys);
  const auto data_path = required(config, "data");
  const auto output = required(config, "output");
  const auto svg_path = config.get_string("svg", "");
  dataset::LoadOptions load;
  const auto delim = config.get_string("delimiter", "auto");
  static const std::map<std::string, char> kDelims{
      {"auto", '\0'}, {"comma", ','}, {",", ','}, {"semicolon", ';'}, {";", ';'}, {"tab", '\t'},
      {"space", ' '}, {"whitespace", ' '}};
  const auto it = kDelims.find(delim);
  if (it == kDelims.end()) throw DomainError("delimiter: unknown value '" + delim + "'");
  load.delimiter = it->second;
  load.skip_header = config.get_bool("skip_header", false);

  const auto kernel_name = config.get_string("kernel", "gaussian");
  kernels::Kernel kernel = kernels::Kernel::linear();
  if (kernel_name == "gaussian")
    kernel = kernels::Kernel::gaussian(config.get_double("width", 1.2));
  else if (kernel_name == "polynomial")
    kernel = kernels::Kernel::polynomial(config.get_int("degree", 9), config.get_double("offset", 1.0));
  else if (kernel_name != "linear")
    throw DomainError("kernel: unknown kernel '" + kernel_name + "'");
  const int iterations = config.get_int("iterations", 500);
  if (iterations < 1 || iterations > filters::kMaxIterations)
    throw DomainError("iterations must lie in [1, 1e6]");
  const int train_size = config.get_int("train_size", 1000);
  const auto seed = config.get_uint64("seed", 0);
  const auto specs = method_specs(config);

  const auto data = dataset::load(data_path, load);
  const auto split = dataset::train_test_split(data, train_size, seed);
  const auto scaler = dataset::Standardizer::fit(split.train.features);
  const Eigen::MatrixXd xtr = scaler.apply(split.train.features);
  const Eigen::MatrixXd xte = scaler.apply(split.test.features);
  const double offset = split.train.target.mean();
  const Eigen::VectorXd ytr = split.train.target.array() - offset;

  const auto g = kernels::gram(xtr, kernel);
  const Eigen::MatrixXd cross = kernels::cross_gram(xte, xtr, kernel);
  const Eigen::MatrixXd m = g.matrix / static_cast<double>(train_size);
  const Eigen::VectorXd yte_centered = split.test.target.array() - offset;
  const double inv_test = 1.0 / static_cast<double>(yte_centered.size());

  csv::Table table({"method", "t", "test_error"});
  std::vector<svg::Series> series;
  constexpr int kBlock = 128;
  for (const auto& spec : specs) {
    const auto method = spec.instantiate(g.kappa2);
    std::vector<double> errors(iterations);
    Eigen::MatrixXd block(train_size, kBlock);
    int filled = 0, first_t = 1;
    auto flush = [&] {
      const Eigen::MatrixXd pred = cross * block.leftCols(filled) / static_cast<double>(train_size);
      for (int j = 0; j < filled; ++j)
        errors[first_t - 1 + j] = (pred.col(j) - yte_centered).squaredNorm() * inv_test;
      first_t += filled;
      filled = 0;
    };
    solvers::iterate(method, m, ytr, iterations, [&](int t, const Eigen::VectorXd& u) {
      if (t == 0) return;
      block.col(filled++) = u;
      if (filled == kBlock) flush();
    });
    if (filled > 0) flush();

    const std::string label(method.label());
    const int best = experiments::first_argmin(errors);
    svg::Series s{label, {}, {}, best - 1};
    for (int t = 1; t <= iterations; ++t) {
      table.add_row({label, format_int(t), csv::format(errors[t - 1])});
      s.x.push_back(t);
      s.y.push_back(errors[t - 1]);
    }
    series.push_back(std::move(s));
    summary_stream(output, out, log)
        << label << ": argmin_t=" << best << " min_test_error=" << csv::format(errors[best - 1]) << "\n";
  }
  emit(output, table.text(), out);
  if (!svg_path.empty())
    csv::write_file(svg_path, svg::loglog_chart(series, "iteration t", "test mean squared error"));
  return kOk;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Early-stopped gradient descent, nu-method and Nesterov acceleration for kernel "
               "least squares",
               "accelreg"};
  app.require_subcommand(1);

  struct Sub {
    CLI::App* app;
    std::span<const KeyInfo> keys;
    int (*run)(const RunConfig&, std::ostream&, std::ostream&);
    std::string config_path;
    std::map<std::string, std::string> overrides;
  };
  std::vector<Sub> subs;
  subs.reserve(4);
  auto add = [&](const char* name, const char* help, std::span<const KeyInfo> keys,
                 int (*run)(const RunConfig&, std::ostream&, std::ostream&)) {
    auto* sub = app.add_subcommand(name, help);
    subs.push_back({sub, keys, run, "", {}});
    auto& s = subs.back();
    sub->add_option("-c,--config", s.config_path, "key=value settings file");
    for (const auto& k : keys)
      sub->add_option("--" + std::string(k.key), s.overrides[std::string(k.key)], std::string(k.help));
  };
  add("verify", "check the filter bounds numerically", kVerifyKeys, cmd_verify);
  add("filters", "dump g_t and r_t on a sigma grid as CSV", kFiltersKeys, cmd_filters);
  add("simulate", "synthetic early-stopping experiment", kSimulateKeys, cmd_simulate);
  add("fit", "test error curves on a delimited dataset", kFitKeys, cmd_fit);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? kOk : kUsage;
  }

  try {
    for (auto& s : subs) {
      if (!s.app->parsed()) continue;
      RunConfig cfg = s.config_path.empty() ? RunConfig{} : RunConfig::load(s.config_path);
      for (const auto& k : s.keys) {
        const std::string key(k.key);
        if (s.app->count("--" + key) > 0) cfg.set(key, s.overrides[key]);
      }
      return s.run(cfg, out, err);
    }
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kData;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kData;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << "\n";
    return kNumeric;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kNumeric;
  }
  return kUsage;
}

}  // namespace accelreg::commands
