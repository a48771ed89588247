#include "accelreg/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <vector>

#include "accelreg/errors.hpp"

namespace accelreg::dataset {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

char detect(std::string_view line) {
  for (char c : {',', ';', '\t'})
    if (line.find(c) != std::string_view::npos) return c;
  return ' ';
}

std::vector<std::string_view> split(std::string_view line, char delim) {
  std::vector<std::string_view> cells;
  if (delim == ' ') {
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && is_space(line[i])) ++i;
      const std::size_t start = i;
      while (i < line.size() && !is_space(line[i])) ++i;
      if (i > start) cells.push_back(line.substr(start, i - start));
    }
    return cells;
  }
  while (true) {
    const auto pos = line.find(delim);
    cells.push_back(trim(line.substr(0, pos)));
    if (pos == std::string_view::npos) break;
    line = line.substr(pos + 1);
  }
  return cells;
}

[[noreturn]] void cell_error(const std::string& source, int line, std::size_t col,
                             const std::string& what) {
  throw DataError(source + ": line " + std::to_string(line) + ", column " +
                  std::to_string(col + 1) + ": " + what);
}

}  // namespace

Dataset parse(std::istream& in, const LoadOptions& options, const std::string& source) {
  char delim = options.delimiter;
  std::vector<std::vector<double>> rows;
  std::size_t width = 0;
  std::string raw;
  int line_no = 0;
  bool header_pending = options.skip_header;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty()) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    if (delim == '\0') delim = detect(line);
    const auto cells = split(line, delim);
    if (width == 0) {
      width = cells.size();
      if (width < 2) cell_error(source, line_no, 0, "need at least one feature and a target");
    } else if (cells.size() != width) {
      cell_error(source, line_no, std::min(cells.size(), width),
                 "expected " + std::to_string(width) + " columns, found " +
                     std::to_string(cells.size()));
    }
    std::vector<double> row(width);
    for (std::size_t c = 0; c < width; ++c) {
      const auto cell = cells[c];
      if (cell.empty()) cell_error(source, line_no, c, "missing value");
      double v = 0.0;
      const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || end != cell.data() + cell.size()) {
        std::string msg = "non-numeric value '" + std::string(cell) + "'";
        if (rows.empty()) msg += " (use skip_header for a header row)";
        cell_error(source, line_no, c, msg);
      }
      if (!std::isfinite(v)) cell_error(source, line_no, c, "non-finite value");
      row[c] = v;
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DataError(source + ": no data rows");

  Dataset d;
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto p = static_cast<Eigen::Index>(width) - 1;
  d.features.resize(n, p);
  d.target.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) d.features(i, j) = rows[i][j];
    d.target(i) = rows[i][p];
  }
  return d;
}

Dataset load(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open dataset " + path.string());
  return parse(in, options, path.string());
}

Split train_test_split(const Dataset& data, int train_size, std::uint64_t seed) {
  const auto n = static_cast<int>(data.target.size());
  if (train_size < 1 || train_size >= n)
    throw DomainError("train_size must lie in [1, " + std::to_string(n - 1) + "] for " +
                      std::to_string(n) + " rows");
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  std::mt19937_64 rng(seq);
  std::shuffle(order.begin(), order.end(), rng);

  auto take = [&](int begin, int end) {
    Dataset d;
    d.features.resize(end - begin, data.features.cols());
    d.target.resize(end - begin);
    for (int i = begin; i < end; ++i) {
      d.features.row(i - begin) = data.features.row(order[i]);
      d.target(i - begin) = data.target(order[i]);
    }
    return d;
  };
  return {take(0, train_size), take(train_size, n)};
}

Standardizer Standardizer::fit(const Eigen::MatrixXd& x) {
  Standardizer s;
  s.mean = x.colwise().mean();
  s.scale = ((x.rowwise() - s.mean).array().square().colwise().mean()).sqrt();
  for (Eigen::Index j = 0; j < s.scale.size(); ++j)
    if (!(s.scale(j) > 0.0)) s.scale(j) = 1.0;
  return s;
}

Eigen::MatrixXd Standardizer::apply(const Eigen::MatrixXd& x) const {
  return (x.rowwise() - mean).array().rowwise() / scale.array();
}

}  // namespace accelreg::dataset
