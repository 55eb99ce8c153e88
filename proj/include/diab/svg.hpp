#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace diab {

// Minimal self-contained SVG line charts over the unit square — every
// curve the pipeline emits is a rate against a rate.
struct ChartSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct ChartBand {
  std::vector<double> x;
  std::vector<double> lower;
  std::vector<double> upper;
  std::string label;
};

struct ChartSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<ChartSeries> series;
  std::optional<ChartBand> band;
  std::vector<std::pair<double, std::string>> vlines;  // x position + caption
  bool diagonal = false;  // chance-level reference line
};

std::string render_chart_svg(const ChartSpec& spec);
void write_chart_svg(const std::string& path, const ChartSpec& spec);

}  // namespace diab
