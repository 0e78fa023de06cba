#include "beastal/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace beastal {

namespace {

constexpr int kMarginLeft = 72;
constexpr int kMarginRight = 24;
constexpr int kMarginTop = 44;
constexpr int kMarginBottom = 56;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string escape_text(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = 0.0;
  double hi = 1.0;
};

Range pad(Range r) {
  if (r.hi <= r.lo) {
    const double bump = r.lo == 0.0 ? 1.0 : std::abs(r.lo) * 0.5;
    return {r.lo - bump, r.hi + bump};
  }
  const double span = r.hi - r.lo;
  return {r.lo - 0.03 * span, r.hi + 0.03 * span};
}

}  // namespace

std::string svg_curve_string(const std::vector<SvgSeries>& series, const SvgOptions& options) {
  if (series.empty()) throw std::invalid_argument("svg chart needs at least one series");
  for (const auto& s : series) {
    if (s.x.empty()) throw std::invalid_argument("svg series '" + s.label + "' is empty");
    if (s.x.size() != s.y.size()) {
      throw std::invalid_argument("svg series '" + s.label + "' has mismatched lengths");
    }
  }

  // With a log axis, non-positive samples are clamped to the smallest
  // positive value so converged-to-zero losses stay drawable.
  double min_positive = std::numeric_limits<double>::infinity();
  if (options.log_y) {
    for (const auto& s : series) {
      for (double v : s.y) {
        if (v > 0.0 && v < min_positive) min_positive = v;
      }
    }
    if (!std::isfinite(min_positive)) min_positive = 1e-16;
  }
  auto transform_y = [&](double v) {
    if (!options.log_y) return v;
    return std::log10(std::max(v, min_positive));
  };

  Range xr{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  Range yr = xr;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      xr.lo = std::min(xr.lo, s.x[i]);
      xr.hi = std::max(xr.hi, s.x[i]);
      const double ty = transform_y(s.y[i]);
      yr.lo = std::min(yr.lo, ty);
      yr.hi = std::max(yr.hi, ty);
    }
  }
  xr = pad(xr);
  yr = pad(yr);

  const double plot_w = options.width - kMarginLeft - kMarginRight;
  const double plot_h = options.height - kMarginTop - kMarginBottom;
  auto px = [&](double x) { return kMarginLeft + (x - xr.lo) / (xr.hi - xr.lo) * plot_w; };
  auto py = [&](double y) {
    return kMarginTop + plot_h - (transform_y(y) - yr.lo) / (yr.hi - yr.lo) * plot_h;
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width << "\" height=\""
      << options.height << "\" viewBox=\"0 0 " << options.width << ' ' << options.height
      << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << options.width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << escape_text(options.title)
      << "</text>\n";

  // Epoch guides go under the data.
  if (options.epoch_marker_period > 0) {
    for (double x = xr.lo + options.epoch_marker_period -
                    std::fmod(xr.lo, static_cast<double>(options.epoch_marker_period));
         x < xr.hi; x += static_cast<double>(options.epoch_marker_period)) {
      svg << "<line x1=\"" << num(px(x)) << "\" y1=\"" << kMarginTop << "\" x2=\"" << num(px(x))
          << "\" y2=\"" << num(kMarginTop + plot_h)
          << "\" stroke=\"#dddddd\" stroke-dasharray=\"3,4\"/>\n";
    }
  }

  // Axis ticks: powers of ten on a log axis, five even divisions otherwise.
  auto tick_label = [&](double tv) {
    return options.log_y ? "1e" + num(tv) : num(tv);
  };
  std::vector<double> y_ticks;
  if (options.log_y) {
    const int lo = static_cast<int>(std::ceil(yr.lo));
    const int hi = static_cast<int>(std::floor(yr.hi));
    const int step = std::max(1, (hi - lo) / 7 + 1);
    for (int e = lo; e <= hi; e += step) y_ticks.push_back(e);
    if (y_ticks.empty()) y_ticks.push_back((yr.lo + yr.hi) / 2.0);
  } else {
    for (int i = 0; i <= 5; ++i) y_ticks.push_back(yr.lo + (yr.hi - yr.lo) * i / 5.0);
  }
  for (double tv : y_ticks) {
    const double y = kMarginTop + plot_h - (tv - yr.lo) / (yr.hi - yr.lo) * plot_h;
    svg << "<line x1=\"" << kMarginLeft << "\" y1=\"" << num(y) << "\" x2=\""
        << num(kMarginLeft + plot_w) << "\" y2=\"" << num(y)
        << "\" stroke=\"#eeeeee\"/>\n";
    svg << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << num(y + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << tick_label(tv) << "</text>\n";
  }
  for (int i = 0; i <= 5; ++i) {
    const double xv = xr.lo + (xr.hi - xr.lo) * i / 5.0;
    svg << "<text x=\"" << num(px(xv)) << "\" y=\"" << num(kMarginTop + plot_h + 18)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << num(xv)
        << "</text>\n";
  }

  svg << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\"" << num(plot_w)
      << "\" height=\"" << num(plot_h) << "\" fill=\"none\" stroke=\"#333333\"/>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % (sizeof kPalette / sizeof kPalette[0])];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < series[s].x.size(); ++i) {
      if (i) svg << ' ';
      svg << num(px(series[s].x[i])) << ',' << num(py(series[s].y[i]));
    }
    svg << "\"/>\n";
    const double ly = kMarginTop + 14 + 16.0 * static_cast<double>(s);
    svg << "<line x1=\"" << num(kMarginLeft + plot_w - 150) << "\" y1=\"" << num(ly - 4)
        << "\" x2=\"" << num(kMarginLeft + plot_w - 126) << "\" y2=\"" << num(ly - 4)
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << num(kMarginLeft + plot_w - 120) << "\" y=\"" << num(ly)
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape_text(series[s].label)
        << "</text>\n";
  }

  svg << "<text x=\"" << num(kMarginLeft + plot_w / 2) << "\" y=\"" << options.height - 14
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
      << escape_text(options.x_label) << "</text>\n";
  svg << "<text x=\"18\" y=\"" << num(kMarginTop + plot_h / 2)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
      << "transform=\"rotate(-90 18 " << num(kMarginTop + plot_h / 2) << ")\">"
      << escape_text(options.y_label) << "</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

void emit_svg_curve(const std::string& path, const std::vector<SvgSeries>& series,
                    const SvgOptions& options) {
  const std::string body = svg_curve_string(series, options);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << body;
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace beastal
