#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace hypflow::cli {

struct PlotSeries {
  std::string label;
  std::vector<double> y;
};

struct LinePlot {
  std::string title;
  std::string x_label;
  std::vector<double> x;
  std::vector<PlotSeries> series;
  bool log_y = false;
};

// Standalone SVG line chart. Nonpositive values are skipped on a log axis.
std::string render_svg(const LinePlot& plot);
void write_svg(const std::filesystem::path& path, const LinePlot& plot);

}  // namespace hypflow::cli
