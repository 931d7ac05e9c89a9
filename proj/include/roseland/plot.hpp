#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace roseland {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> color_values;  // optional, one per point; mapped to a hue ramp
  bool line = false;                 // polyline instead of dots
};

struct PlotOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  int width = 640;
  int height = 480;
};

/// Self-contained SVG with axes, tick labels and a legend.
std::string svg_plot(std::span<const PlotSeries> series, const PlotOptions& options);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace roseland
