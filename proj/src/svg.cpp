#include "qsl/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace qsl {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 72.0;
constexpr double kRight = 696.0;
constexpr double kTop = 44.0;
constexpr double kBottom = 420.0;
constexpr int kTicks = 5;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                    "#9467bd", "#8c564b", "#7f7f7f"};

std::string escape_xml(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (const char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void include(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }

  void pad() {
    if (lo > hi) throw std::invalid_argument("svg chart has no finite points");
    const double span = hi - lo;
    const double margin = span > 0.0 ? 0.04 * span : std::max(1.0, std::fabs(lo)) * 0.1;
    lo -= margin;
    hi += margin;
  }

  double fraction(double v) const { return (v - lo) / (hi - lo); }
};

void append_format(std::string& out, const char* fmt, ...)
    __attribute__((format(printf, 2, 3)));

void append_format(std::string& out, const char* fmt, ...) {
  char buffer[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buffer, sizeof buffer, fmt, args);
  va_end(args);
  out += buffer;
}

}  // namespace

std::string line_chart_svg(std::string_view title, std::string_view x_label,
                           std::string_view y_label,
                           std::span<const SvgSeries> series) {
  if (series.empty()) throw std::invalid_argument("svg chart needs at least one series");
  Range xr;
  Range yr;
  for (const SvgSeries& s : series) {
    if (s.x.size() != s.y.size()) {
      throw std::invalid_argument("svg series '" + s.label + "' has mismatched x/y sizes");
    }
    for (size_t k = 0; k < s.x.size(); ++k) {
      if (std::isfinite(s.x[k]) && std::isfinite(s.y[k])) {
        xr.include(s.x[k]);
        yr.include(s.y[k]);
      }
    }
  }
  xr.pad();
  yr.pad();

  const auto px = [&xr](double v) { return kLeft + xr.fraction(v) * (kRight - kLeft); };
  const auto py = [&yr](double v) { return kBottom - yr.fraction(v) * (kBottom - kTop); };

  std::string out;
  append_format(out,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%g\" height=\"%g\" "
                "viewBox=\"0 0 %g %g\" font-family=\"sans-serif\">\n",
                kWidth, kHeight, kWidth, kHeight);
  out += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  append_format(out, "<text x=\"%.2f\" y=\"24\" font-size=\"16\" text-anchor=\"middle\" "
                     "fill=\"#222222\">%s</text>\n",
                (kLeft + kRight) / 2.0, escape_xml(title).c_str());

  for (int i = 0; i < kTicks; ++i) {
    const double fx = double(i) / (kTicks - 1);
    const double vx = xr.lo + fx * (xr.hi - xr.lo);
    const double cx = kLeft + fx * (kRight - kLeft);
    append_format(out, "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
                       "stroke=\"#dddddd\"/>\n",
                  cx, kTop, cx, kBottom);
    append_format(out, "<text x=\"%.2f\" y=\"%.2f\" font-size=\"11\" text-anchor=\"middle\" "
                       "fill=\"#222222\">%.4g</text>\n",
                  cx, kBottom + 18.0, vx);

    const double vy = yr.lo + fx * (yr.hi - yr.lo);
    const double cy = kBottom - fx * (kBottom - kTop);
    append_format(out, "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
                       "stroke=\"#dddddd\"/>\n",
                  kLeft, cy, kRight, cy);
    append_format(out, "<text x=\"%.2f\" y=\"%.2f\" font-size=\"11\" text-anchor=\"end\" "
                       "fill=\"#222222\">%.4g</text>\n",
                  kLeft - 8.0, cy + 4.0, vy);
  }

  append_format(out, "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
                     "stroke=\"#222222\"/>\n",
                kLeft, kBottom, kRight, kBottom);
  append_format(out, "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
                     "stroke=\"#222222\"/>\n",
                kLeft, kTop, kLeft, kBottom);
  append_format(out, "<text x=\"%.2f\" y=\"%.2f\" font-size=\"13\" text-anchor=\"middle\" "
                     "fill=\"#222222\">%s</text>\n",
                (kLeft + kRight) / 2.0, kHeight - 14.0, escape_xml(x_label).c_str());
  append_format(out, "<text x=\"18\" y=\"%.2f\" font-size=\"13\" text-anchor=\"middle\" "
                     "fill=\"#222222\" transform=\"rotate(-90 18 %.2f)\">%s</text>\n",
                (kTop + kBottom) / 2.0, (kTop + kBottom) / 2.0,
                escape_xml(y_label).c_str());

  for (size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % (sizeof kPalette / sizeof kPalette[0])];
    std::string points;
    for (size_t k = 0; k < series[s].x.size(); ++k) {
      if (!std::isfinite(series[s].x[k]) || !std::isfinite(series[s].y[k])) continue;
      char buffer[64];
      std::snprintf(buffer, sizeof buffer, "%s%.2f,%.2f", points.empty() ? "" : " ",
                    px(series[s].x[k]), py(series[s].y[k]));
      points += buffer;
    }
    append_format(out, "<polyline fill=\"none\" stroke=\"%s\" stroke-width=\"1.5\" "
                       "points=\"%s\"/>\n",
                  color, points.c_str());

    const double ly = kTop + 16.0 + 18.0 * double(s);
    append_format(out, "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
                       "stroke=\"%s\" stroke-width=\"2\"/>\n",
                  kRight - 150.0, ly, kRight - 122.0, ly, color);
    append_format(out, "<text x=\"%.2f\" y=\"%.2f\" font-size=\"12\" "
                       "fill=\"#222222\">%s</text>\n",
                  kRight - 114.0, ly + 4.0, escape_xml(series[s].label).c_str());
  }

  out += "</svg>\n";
  return out;
}

}  // namespace qsl
