#pragma once

#include <string>
#include <vector>

namespace fbpt {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  int width = 640;
  int height = 400;
};

// Renders a standalone SVG line chart. Points with non-finite coordinates are skipped.
std::string render_svg(const PlotSpec& spec, const std::vector<Series>& series);

}  // namespace fbpt
