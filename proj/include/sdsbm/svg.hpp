#pragma once

#include <string>
#include <vector>

namespace sdsbm {

/// One curve on a panel: mean values with a +-1 sd band.
struct ChartSeries {
  std::string label;
  std::string color;  // e.g. "#d62728"
  std::vector<double> x;
  std::vector<double> mean;
  std::vector<double> sd;
};

/// Self-contained SVG line chart: axes, ticks, legend, one polyline and one
/// translucent band per series. y values are clipped to [y_min, y_max].
std::string render_line_chart(const std::string& title, const std::string& x_label,
                              const std::string& y_label, double y_min, double y_max,
                              const std::vector<ChartSeries>& series);

}  // namespace sdsbm
