#include "diab/svg.hpp"

#include <cstdio>
#include <fstream>

#include "diab/errors.hpp"

namespace diab {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 62.0;
constexpr double kRight = 18.0;
constexpr double kTop = 42.0;
constexpr double kBottom = 52.0;

const char* kPalette[] = {"#4682b4", "#b22222", "#2e8b57", "#ff8c00",
                          "#7b3294", "#008080", "#708090"};
constexpr size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

double px(double x) { return kLeft + x * (kWidth - kLeft - kRight); }
double py(double y) { return kHeight - kBottom - y * (kHeight - kTop - kBottom); }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string escape_text(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

void append_polyline(std::string& svg, const std::vector<double>& x,
                     const std::vector<double>& y, const char* color) {
  svg += "<polyline fill=\"none\" stroke=\"";
  svg += color;
  svg += "\" stroke-width=\"1.6\" points=\"";
  for (size_t i = 0; i < x.size(); ++i) {
    if (i) svg += ' ';
    svg += fmt(px(x[i])) + "," + fmt(py(y[i]));
  }
  svg += "\"/>\n";
}

}  // namespace

std::string render_chart_svg(const ChartSpec& spec) {
  for (const ChartSeries& s : spec.series)
    if (s.x.size() != s.y.size())
      throw ArgumentError("chart series has mismatched coordinate lengths");
  if (spec.band &&
      (spec.band->x.size() != spec.band->lower.size() ||
       spec.band->x.size() != spec.band->upper.size()))
    throw ArgumentError("chart band has mismatched coordinate lengths");

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) + "\" height=\"" +
         fmt(kHeight) + "\" viewBox=\"0 0 " + fmt(kWidth) + " " + fmt(kHeight) + "\">\n";
  svg += "<rect width=\"" + fmt(kWidth) + "\" height=\"" + fmt(kHeight) +
         "\" fill=\"white\"/>\n";
  svg += "<text x=\"" + fmt(kWidth / 2) +
         "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">" +
         escape_text(spec.title) + "</text>\n";

  // gridlines and ticks every 0.2
  for (int i = 0; i <= 5; ++i) {
    const double v = static_cast<double>(i) / 5.0;
    svg += "<line x1=\"" + fmt(px(v)) + "\" y1=\"" + fmt(py(0)) + "\" x2=\"" + fmt(px(v)) +
           "\" y2=\"" + fmt(py(1)) + "\" stroke=\"#dddddd\" stroke-width=\"0.7\"/>\n";
    svg += "<line x1=\"" + fmt(px(0)) + "\" y1=\"" + fmt(py(v)) + "\" x2=\"" + fmt(px(1)) +
           "\" y2=\"" + fmt(py(v)) + "\" stroke=\"#dddddd\" stroke-width=\"0.7\"/>\n";
    char tick[8];
    std::snprintf(tick, sizeof(tick), "%.1f", v);
    svg += "<text x=\"" + fmt(px(v)) + "\" y=\"" + fmt(py(0) + 18) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" + tick +
           "</text>\n";
    svg += "<text x=\"" + fmt(px(0) - 8) + "\" y=\"" + fmt(py(v) + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + tick +
           "</text>\n";
  }

  if (spec.band) {
    svg += "<polygon fill=\"#b0c4de\" fill-opacity=\"0.5\" stroke=\"none\" points=\"";
    const ChartBand& b = *spec.band;
    for (size_t i = 0; i < b.x.size(); ++i) {
      if (i) svg += ' ';
      svg += fmt(px(b.x[i])) + "," + fmt(py(b.upper[i]));
    }
    for (size_t i = b.x.size(); i-- > 0;)
      svg += " " + fmt(px(b.x[i])) + "," + fmt(py(b.lower[i]));
    svg += "\"/>\n";
  }

  if (spec.diagonal)
    svg += "<line x1=\"" + fmt(px(0)) + "\" y1=\"" + fmt(py(0)) + "\" x2=\"" + fmt(px(1)) +
           "\" y2=\"" + fmt(py(1)) +
           "\" stroke=\"#999999\" stroke-width=\"1\" stroke-dasharray=\"5,4\"/>\n";

  for (const auto& [x, caption] : spec.vlines) {
    svg += "<line x1=\"" + fmt(px(x)) + "\" y1=\"" + fmt(py(0)) + "\" x2=\"" + fmt(px(x)) +
           "\" y2=\"" + fmt(py(1)) +
           "\" stroke=\"#555555\" stroke-width=\"1\" stroke-dasharray=\"2,3\"/>\n";
    if (!caption.empty())
      svg += "<text x=\"" + fmt(px(x) + 4) + "\" y=\"" + fmt(py(1) + 12) +
             "\" font-family=\"sans-serif\" font-size=\"11\">" + escape_text(caption) +
             "</text>\n";
  }

  for (size_t s = 0; s < spec.series.size(); ++s)
    append_polyline(svg, spec.series[s].x, spec.series[s].y, kPalette[s % kPaletteSize]);

  // axes on top of the data
  svg += "<line x1=\"" + fmt(px(0)) + "\" y1=\"" + fmt(py(0)) + "\" x2=\"" + fmt(px(1)) +
         "\" y2=\"" + fmt(py(0)) + "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  svg += "<line x1=\"" + fmt(px(0)) + "\" y1=\"" + fmt(py(0)) + "\" x2=\"" + fmt(px(0)) +
         "\" y2=\"" + fmt(py(1)) + "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  svg += "<text x=\"" + fmt((px(0) + px(1)) / 2) + "\" y=\"" + fmt(kHeight - 12) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
         escape_text(spec.x_label) + "</text>\n";
  svg += "<text x=\"16\" y=\"" + fmt((py(0) + py(1)) / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 16 " +
         fmt((py(0) + py(1)) / 2) + ")\">" + escape_text(spec.y_label) + "</text>\n";

  // legend, top-left inside the plot area
  double ly = py(1) + 14;
  for (size_t s = 0; s < spec.series.size(); ++s) {
    if (spec.series[s].label.empty()) continue;
    svg += "<line x1=\"" + fmt(px(0) + 10) + "\" y1=\"" + fmt(ly - 4) + "\" x2=\"" +
           fmt(px(0) + 34) + "\" y2=\"" + fmt(ly - 4) + "\" stroke=\"";
    svg += kPalette[s % kPaletteSize];
    svg += "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + fmt(px(0) + 40) + "\" y=\"" + fmt(ly) +
           "\" font-family=\"sans-serif\" font-size=\"11\">" + escape_text(spec.series[s].label) +
           "</text>\n";
    ly += 16.0;
  }
  if (spec.band && !spec.band->label.empty()) {
    svg += "<rect x=\"" + fmt(px(0) + 10) + "\" y=\"" + fmt(ly - 12) +
           "\" width=\"24\" height=\"10\" fill=\"#b0c4de\" fill-opacity=\"0.5\"/>\n";
    svg += "<text x=\"" + fmt(px(0) + 40) + "\" y=\"" + fmt(ly) +
           "\" font-family=\"sans-serif\" font-size=\"11\">" + escape_text(spec.band->label) +
           "</text>\n";
  }

  svg += "</svg>\n";
  return svg;
}

void write_chart_svg(const std::string& path, const ChartSpec& spec) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write chart file: " + path);
  out << render_chart_svg(spec);
  if (!out) throw IoError("write failure on: " + path);
}

}  // namespace diab
