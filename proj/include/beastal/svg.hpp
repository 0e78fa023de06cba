#pragma once

#include <string>
#include <vector>

namespace beastal {

struct SvgSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;  // same length as x
};

struct SvgOptions {
  std::string title;
  std::string x_label = "t";
  std::string y_label;
  bool log_y = false;
  long epoch_marker_period = 0;  // vertical guides every N x-units, 0 = off
  int width = 860;
  int height = 520;
};

/// Standalone line chart. Throws std::invalid_argument when no series or an
/// empty series is given; with log_y, non-positive values are drawn at the
/// smallest positive value present.
std::string svg_curve_string(const std::vector<SvgSeries>& series, const SvgOptions& options);

void emit_svg_curve(const std::string& path, const std::vector<SvgSeries>& series,
                    const SvgOptions& options);

}  // namespace beastal
