#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qsl {

struct SvgSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

// Self-contained 720x480 line chart: fixed palette, axes with value ticks,
// and a legend. No external references, and coordinates are formatted with
// fixed precision so equal inputs render to equal bytes.
std::string line_chart_svg(std::string_view title, std::string_view x_label,
                           std::string_view y_label,
                           std::span<const SvgSeries> series);

}  // namespace qsl
