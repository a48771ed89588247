#pragma once

// Minimal static line chart with log10 axes on a fixed 800x600 viewBox.

#include <string>
#include <vector>

namespace accelreg::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  // Index into x/y drawn with a marker, or -1.
  int marker = -1;
};

// Points with a non-positive or non-finite coordinate are dropped.
std::string loglog_chart(const std::vector<Series>& series, const std::string& x_label,
                         const std::string& y_label);

}  // namespace accelreg::svg
