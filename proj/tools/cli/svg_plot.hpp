#pragma once

#include <string>
#include <vector>

namespace vflow::cli {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Static SVG line plot: axes with min/max tick labels, one polyline per series
/// and a legend. Output depends only on the inputs.
std::string render_svg(const std::vector<Series>& series, const std::string& title,
                       const std::string& x_label, const std::string& y_label);

}  // namespace vflow::cli
