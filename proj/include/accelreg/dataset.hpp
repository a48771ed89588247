#pragma once

// Delimiter-separated numeric tables with the regression target in the last
// column.

#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>

#include <Eigen/Dense>

namespace accelreg::dataset {

struct Dataset {
  Eigen::MatrixXd features;  // one row per example
  Eigen::VectorXd target;
};

struct LoadOptions {
  // '\0' detects from the first data line: ',', ';', tab, else runs of
  // whitespace.
  char delimiter = '\0';
  bool skip_header = false;
};

// Throws DataError naming the 1-based line and column of a missing,
// non-numeric or non-finite cell, or of a row with the wrong width.
Dataset parse(std::istream& in, const LoadOptions& options, const std::string& source = "input");

// IoError when the file cannot be opened.
Dataset load(const std::filesystem::path& path, const LoadOptions& options);

struct Split {
  Dataset train, test;
};

// Seeded shuffle; the first train_size rows go to train, the rest to test.
Split train_test_split(const Dataset& data, int train_size, std::uint64_t seed);

// Column means and standard deviations (population) of a feature matrix.
// Constant columns get scale 1.
struct Standardizer {
  Eigen::RowVectorXd mean;
  Eigen::RowVectorXd scale;

  static Standardizer fit(const Eigen::MatrixXd& x);
  Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const;
};

}  // namespace accelreg::dataset
