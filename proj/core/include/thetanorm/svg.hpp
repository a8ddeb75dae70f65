#pragma once

#include <string>
#include <vector>

namespace thetanorm {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Standalone SVG document: axes with min/max tick labels, one polyline with
/// point markers per series, and a legend.
std::string line_plot_svg(const std::vector<PlotSeries>& series, const std::string& title,
                          const std::string& x_label, const std::string& y_label);

}  // namespace thetanorm
