#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "accelreg/commands.hpp"
#include "accelreg/config.hpp"
#include "accelreg/csv.hpp"
#include "accelreg/dataset.hpp"
#include "accelreg/errors.hpp"
#include "accelreg/svg.hpp"

using namespace accelreg;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("accelreg_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
             ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

struct CliRun {
  int code;
  std::string out, err;
};

CliRun cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = commands::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> read_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST(RunConfig, ParseAndTypedAccess) {
  const auto cfg = RunConfig::parse("# comment\n  a = 1.5 \n\nb=7\nlist = x, y,,z\nflag=true\n");
  EXPECT_DOUBLE_EQ(cfg.get_double("a", 0), 1.5);
  EXPECT_EQ(cfg.get_int("b", 0), 7);
  EXPECT_EQ(cfg.get_list("list", {}), (std::vector<std::string>{"x", "y", "z"}));
  EXPECT_TRUE(cfg.get_bool("flag", false));
  EXPECT_EQ(cfg.get_int("missing", 3), 3);
  EXPECT_THROW(cfg.get_int("a", 0), DomainError);
  EXPECT_THROW(cfg.get_double("list", 0), DomainError);
  EXPECT_THROW(RunConfig::parse("novalue\n"), DomainError);
  EXPECT_THROW(RunConfig::parse("a=1\na=2\n"), DomainError);
  EXPECT_THROW(RunConfig::parse("bad key=1\n"), DomainError);
  EXPECT_THROW(RunConfig::parse("x=nan\n").get_double("x", 0), DomainError);
}

TEST(RunConfig, RoundTripProperty) {
  std::mt19937_64 rng(8);
  const std::string key_chars = "abcxyz_.-019";
  const std::string value_chars = "abc 01.,=#-+e";
  for (int trial = 0; trial < 200; ++trial) {
    RunConfig cfg;
    const int n = static_cast<int>(rng() % 6);
    for (int i = 0; i < n; ++i) {
      std::string key, value;
      for (int k = 0; k < 1 + static_cast<int>(rng() % 6); ++k) key += key_chars[rng() % key_chars.size()];
      for (int k = 0; k < static_cast<int>(rng() % 8); ++k) value += value_chars[rng() % value_chars.size()];
      while (!value.empty() && value.front() == ' ') value.erase(value.begin());
      while (!value.empty() && value.back() == ' ') value.pop_back();
      cfg.set(key, value);
    }
    EXPECT_EQ(RunConfig::parse(cfg.serialize()), cfg);
  }
  RunConfig cfg;
  EXPECT_THROW(cfg.set("k", " padded"), DomainError);
  EXPECT_THROW(cfg.set("k", "two\nlines"), DomainError);
}

TEST(Csv, FormatAndTable) {
  EXPECT_EQ(csv::format(0.1), "0.10000000000000001");
  EXPECT_EQ(csv::format(1.0), "1");
  char buf[64];
  for (double v : {1.0 / 3.0, 12345.678, 6.02e23, 1e-8, -2.5e-300, 0.0}) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    EXPECT_EQ(csv::format(v), buf);
  }
  csv::Table t({"a", "b"});
  t.add_row({"1", "2"});
  EXPECT_EQ(t.text(), "a,b\n1,2\n");
  EXPECT_THROW(t.add_row({"1"}), DomainError);
  EXPECT_THROW(csv::write_file("/nonexistent-dir/x.csv", "x"), IoError);
}

TEST(Dataset, ParsesDelimitersAndHeaders) {
  std::istringstream ws("1 2 3\n4\t5  6\n\n");
  auto d = dataset::parse(ws, {});
  EXPECT_EQ(d.features.rows(), 2);
  EXPECT_EQ(d.features.cols(), 2);
  EXPECT_EQ(d.target(1), 6.0);

  std::istringstream comma("x,y,z\n1,2,3\n4,5,6\n");
  EXPECT_THROW(dataset::parse(comma, {}), DataError);
  std::istringstream comma2("x,y,z\n1,2,3\n4,5,6\n");
  d = dataset::parse(comma2, {'\0', true});
  EXPECT_EQ(d.features(1, 0), 4.0);
}

TEST(Dataset, ErrorsNameLineAndColumn) {
  auto message = [](const std::string& text) {
    std::istringstream in(text);
    try {
      dataset::parse(in, {});
    } catch (const DataError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message("1,2,3\n4,,6\n").find("line 2, column 2"), std::string::npos);
  EXPECT_NE(message("1,2,3\n4,5,nan\n").find("line 2, column 3"), std::string::npos);
  EXPECT_NE(message("1,2,3\n4,abc,6\n").find("line 2, column 2"), std::string::npos);
  EXPECT_NE(message("1,2,3\n4,5\n").find("line 2"), std::string::npos);
  EXPECT_NE(message("1\n").find("at least one feature"), std::string::npos);
  EXPECT_EQ(message(""), "input: no data rows");
}

TEST(Dataset, SplitAndStandardize) {
  dataset::Dataset d;
  d.features.resize(10, 2);
  d.target.resize(10);
  for (int i = 0; i < 10; ++i) {
    d.features(i, 0) = i;
    d.features(i, 1) = 5.0;
    d.target(i) = 100 + i;
  }
  const auto a = dataset::train_test_split(d, 7, 4);
  const auto b = dataset::train_test_split(d, 7, 4);
  EXPECT_EQ(a.train.target, b.train.target);
  EXPECT_EQ(a.train.target.size(), 7);
  EXPECT_EQ(a.test.target.size(), 3);
  EXPECT_NEAR(a.train.target.sum() + a.test.target.sum(), d.target.sum(), 0.0);
  for (int i = 0; i < 7; ++i) EXPECT_EQ(a.train.target(i) - 100, a.train.features(i, 0));
  EXPECT_THROW(dataset::train_test_split(d, 10, 1), DomainError);

  const auto s = dataset::Standardizer::fit(a.train.features);
  const Eigen::MatrixXd z = s.apply(a.train.features);
  EXPECT_NEAR(z.col(0).mean(), 0.0, 1e-14);
  EXPECT_NEAR(z.col(0).squaredNorm() / 7.0, 1.0, 1e-14);
  EXPECT_EQ(z.col(1).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Svg, ChartShape) {
  const std::string s = svg::loglog_chart({{"gd", {1, 10, 100}, {1, 0.1, 0.5}, 1}, {"x", {}, {}, -1}},
                                          "t", "err");
  EXPECT_NE(s.find("viewBox=\"0 0 800 600\""), std::string::npos);
  EXPECT_NE(s.find("<polyline"), std::string::npos);
  EXPECT_NE(s.find("<circle"), std::string::npos);
  EXPECT_EQ(s.back(), '\n');
}

TEST(CliVerify, DefaultPasses) {
  const auto r = cli({"verify"});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
  EXPECT_NE(r.out.find("nesterov_sigma_r2_margin"), std::string::npos);
  EXPECT_NE(r.out.find("18 checks, 0 failed"), std::string::npos);
}

TEST(CliVerify, FaultyStepFails) {
  const auto r = cli({"verify", "--gd_step_scale", "2", "--iterations", "600"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("FAIL  gd_qualification"), std::string::npos);
  const auto r2 = cli({"verify", "--gd_step_scale", "2.5", "--iterations", "600"});
  EXPECT_EQ(r2.code, 1);
  EXPECT_NE(r2.out.find("FAIL  residual_bound[gd]"), std::string::npos);
}

TEST(CliFilters, RowsAndValues) {
  TempDir dir;
  const auto path = (dir / "f.csv").string();
  ASSERT_EQ(cli({"filters", "--iterations", "5", "--grid_points", "7", "--output", path}).code, 0);
  const auto rows = read_csv(slurp(path));
  ASSERT_EQ(rows.size(), 1u + 3u * 6u * 7u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"method", "t", "sigma", "g", "r"}));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double s = std::stod(rows[i][2]), g = std::stod(rows[i][3]), r = std::stod(rows[i][4]);
    EXPECT_LE(std::abs(r + s * g - 1.0), 1e-9);
  }
  const auto gd = cli({"filters", "--methods", "gd", "--sigma_grid", "0.5", "--iterations", "2"});
  EXPECT_EQ(gd.out, "method,t,sigma,g,r\ngd,0,0.5,0,1\ngd,1,0.5,1,0.5\ngd,2,0.5,1.5,0.25\n");
}

TEST(CliSimulate, SchemaMinimaAndDeterminism) {
  TempDir dir;
  spit(dir / "sim.cfg",
       "domain_size=300\nsample_size=30\niterations=25\nrepetitions=4\nseed=5\nthreads=2\n");
  const auto a = (dir / "a.csv").string(), b = (dir / "b.csv").string();
  const auto svg = (dir / "a.svg").string();
  const auto cfg = (dir / "sim.cfg").string();
  ASSERT_EQ(cli({"simulate", "--config", cfg, "--output", a, "--svg", svg}).code, 0);
  ASSERT_EQ(cli({"simulate", "-c", cfg, "--output", b, "--threads", "1"}).code, 0);
  const auto text = slurp(a);
  EXPECT_EQ(text, slurp(b));
  EXPECT_EQ(text.find('\r'), std::string::npos);
  const auto rows = read_csv(text);
  ASSERT_EQ(rows.size(), 1u + 3u * 25u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"method", "t", "mean_error", "var_error", "is_min"}));
  std::map<std::string, int> mins;
  for (std::size_t i = 1; i < rows.size(); ++i) mins[rows[i][0]] += std::stoi(rows[i][4]);
  EXPECT_EQ(mins, (std::map<std::string, int>{{"gd", 1}, {"nesterov", 1}, {"nu", 1}}));
  EXPECT_NE(slurp(svg).find("<svg"), std::string::npos);
}

TEST(CliSimulate, ErrorsMapToExitCodes) {
  EXPECT_EQ(cli({"simulate", "--repetitions", "3"}).code, 2);  // missing output
  EXPECT_EQ(cli({"simulate", "--output", "-", "--sample_size", "0"}).code, 2);
  EXPECT_EQ(cli({"simulate", "--output", "-", "--methods", "sgd"}).code, 2);
  EXPECT_EQ(cli({"simulate", "--output", "/nonexistent-dir/x.csv", "--domain_size", "50",
                 "--sample_size", "10", "--iterations", "3", "--repetitions", "1"})
                .code,
            3);
  EXPECT_EQ(cli({"simulate", "--config", "/nonexistent-dir/x.cfg"}).code, 3);
  EXPECT_EQ(cli({"bogus"}).code, 2);
  EXPECT_EQ(cli({}).code, 2);
  EXPECT_EQ(cli({"--help"}).code, 0);
  TempDir dir;
  spit(dir / "bad.cfg", "unknown_key=1\n");
  EXPECT_EQ(cli({"simulate", "-c", (dir / "bad.cfg").string(), "--output", "-"}).code, 2);
}

TEST(CliFit, ConstantTargetAndDeterminism) {
  TempDir dir;
  std::mt19937_64 rng(2);
  std::normal_distribution<double> normal;
  std::string constant, noisy;
  for (int i = 0; i < 120; ++i) {
    const double a = normal(rng), b = normal(rng);
    constant += std::to_string(a) + "," + std::to_string(b) + ",3.5\n";
    noisy += std::to_string(a) + " " + std::to_string(b) + " " +
             std::to_string(std::sin(a) + 0.1 * normal(rng)) + "\n";
  }
  spit(dir / "const.csv", "f1,f2,y\n" + constant);
  spit(dir / "noisy.txt", noisy);
  const auto out = (dir / "c.csv").string();
  ASSERT_EQ(cli({"fit", "--data", (dir / "const.csv").string(), "--skip_header", "true",
                 "--train_size", "80", "--iterations", "50", "--output", out})
                .code,
            0);
  const auto rows = read_csv(slurp(out));
  ASSERT_EQ(rows.size(), 1u + 3u * 50u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"method", "t", "test_error"}));
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(std::stod(rows[i][2]), 0.0);

  const auto a = (dir / "a.csv").string(), b = (dir / "b.csv").string();
  for (const auto& path : {a, b})
    ASSERT_EQ(cli({"fit", "--data", (dir / "noisy.txt").string(), "--train_size", "80", "--seed", "3",
                   "--kernel", "polynomial", "--degree", "3", "--iterations", "40", "--output", path})
                  .code,
              0);
  EXPECT_EQ(slurp(a), slurp(b));

  EXPECT_EQ(cli({"fit", "--data", (dir / "const.csv").string(), "--train_size", "80", "--output", "-"}).code,
            3);
  EXPECT_EQ(cli({"fit", "--data", (dir / "missing.csv").string(), "--output", "-"}).code, 3);
  EXPECT_EQ(cli({"fit", "--data", (dir / "noisy.txt").string(), "--train_size", "500", "--output", "-"}).code,
            2);
}
