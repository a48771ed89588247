#include "accelreg/csv.hpp"

#include <charconv>
#include <fstream>

#include "accelreg/errors.hpp"

namespace accelreg::csv {

std::string format(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  if (ec != std::errc()) throw NumericError("csv: cannot format value");
  return std::string(buf, end);
}

namespace {

void append_row(std::string& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += cells[i];
  }
  out += '\n';
}

}  // namespace

Table::Table(std::vector<std::string> header) : width_(header.size()) { append_row(text_, header); }

void Table::add_row(std::vector<std::string> cells) {
  if (cells.size() != width_) throw DomainError("csv: row width does not match the header");
  append_row(text_, cells);
  ++rows_;
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw IoError("error while writing " + path.string());
}

}  // namespace accelreg::csv
