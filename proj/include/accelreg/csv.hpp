#pragma once

// CSV and text output: '.' decimal separator, 17 significant digits, LF line
// endings.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace accelreg::csv {

// Same digits as printf("%.17g"), independent of the C locale.
std::string format(double value);

class Table {
 public:
  explicit Table(std::vector<std::string> header);

  // Cells are preformatted; the row width must match the header.
  void add_row(std::vector<std::string> cells);
  std::size_t rows() const { return rows_; }
  const std::string& text() const { return text_; }

 private:
  std::size_t width_;
  std::size_t rows_ = 0;
  std::string text_;
};

// Writes bytes verbatim. Throws IoError.
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace accelreg::csv
