#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace voxplore {

struct PlotSeries {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

struct PlotOptions {
  std::string title;
  std::string x_label = "t [s]";
  std::string y_label;
  std::optional<std::pair<double, double>> y_range;  // auto when unset
  int width = 640;
  int height = 400;
};

/// Self-contained SVG line chart with axes, ticks and a legend.
std::string renderLineChart(const std::vector<PlotSeries>& series, const PlotOptions& options);

}  // namespace voxplore
