#include "hypflow_cli/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "hypflow/error.hpp"

namespace hypflow::cli {
namespace {

constexpr double kWidth = 720, kHeight = 420;
constexpr double kLeft = 80, kRight = 170, kTop = 40, kBottom = 50;
constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string tick(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const LinePlot& plot) {
  auto yval = [&](double y) { return plot.log_y ? std::log10(y) : y; };
  auto usable = [&](double y) { return std::isfinite(y) && (!plot.log_y || y > 0.0); };

  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0;
  double y0 = x0, y1 = -x0;
  for (double x : plot.x) {
    x0 = std::min(x0, x);
    x1 = std::max(x1, x);
  }
  for (const auto& s : plot.series) {
    for (double y : s.y) {
      if (!usable(y)) continue;
      y0 = std::min(y0, yval(y));
      y1 = std::max(y1, yval(y));
    }
  }
  if (!(x1 > x0)) {
    x0 -= 0.5;
    x1 += 0.5;
  }
  if (!std::isfinite(y0)) {
    y0 = 0.0;
    y1 = 1.0;
  }
  if (!(y1 > y0)) {
    const double pad = std::max(std::abs(y0) * 1e-6, 1e-12);
    y0 -= pad;
    y1 += pad;
  }
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return kTop + (1.0 - (y - y0) / (y1 - y0)) * ph; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << num(kLeft) << "\" y=\"22\" font-size=\"14\">" << escape(plot.title)
      << "</text>\n";
  out << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(pw)
      << "\" height=\"" << num(ph) << "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = x0 + (x1 - x0) * i / 4.0;
    const double fy = y0 + (y1 - y0) * i / 4.0;
    out << "<text x=\"" << num(px(fx)) << "\" y=\"" << num(kTop + ph + 16)
        << "\" text-anchor=\"middle\">" << tick(fx) << "</text>\n";
    const std::string label = plot.log_y ? "1e" + tick(fy) : tick(fy);
    out << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(py(fy) + 4)
        << "\" text-anchor=\"end\">" << label << "</text>\n";
    out << "<line x1=\"" << num(kLeft) << "\" x2=\"" << num(kLeft + pw) << "\" y1=\"" << num(py(fy))
        << "\" y2=\"" << num(py(fy)) << "\" stroke=\"#ddd\"/>\n";
  }
  out << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kHeight - 12)
      << "\" text-anchor=\"middle\">" << escape(plot.x_label) << "</text>\n";

  for (std::size_t s = 0; s < plot.series.size(); ++s) {
    const auto& series = plot.series[s];
    const char* color = kColors[s % std::size(kColors)];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < series.y.size() && i < plot.x.size(); ++i) {
      if (!usable(series.y[i])) continue;
      out << (first ? "" : " ") << num(px(plot.x[i])) << ',' << num(py(yval(series.y[i])));
      first = false;
    }
    out << "\"/>\n";
    const double ly = kTop + 14.0 + 16.0 * s;
    out << "<line x1=\"" << num(kLeft + pw + 10) << "\" x2=\"" << num(kLeft + pw + 30) << "\" y1=\""
        << num(ly - 4) << "\" y2=\"" << num(ly - 4) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << num(kLeft + pw + 34) << "\" y=\"" << num(ly) << "\">"
        << escape(series.label) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

void write_svg(const std::filesystem::path& path, const LinePlot& plot) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write plot " + path.string());
  out << render_svg(plot);
}

}  // namespace hypflow::cli
