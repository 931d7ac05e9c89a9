#include "roseland/plot.hpp"

#include "roseland/core.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace roseland {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

// Hue ramp from blue (0) to red (1).
std::string ramp(double t) {
  t = std::clamp(t, 0.0, 1.0);
  const int hue = static_cast<int>(std::lround(240.0 * (1.0 - t)));
  return "hsl(" + std::to_string(hue) + ",80%,45%)";
}

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  bool log = false;

  [[nodiscard]] double map(double v) const { return log ? std::log10(v) : v; }
};

Axis make_axis(std::span<const PlotSeries> series, bool use_x, bool log) {
  Axis a;
  a.log = log;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& s : series) {
    for (double v : use_x ? s.x : s.y) {
      if (!std::isfinite(v) || (log && v <= 0.0)) continue;
      lo = std::min(lo, a.map(v));
      hi = std::max(hi, a.map(v));
    }
  }
  if (!std::isfinite(lo)) {
    lo = 0.0;
    hi = 1.0;
  }
  if (hi - lo < 1e-12) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double pad = 0.04 * (hi - lo);
  a.lo = lo - pad;
  a.hi = hi + pad;
  return a;
}

}  // namespace

std::string svg_plot(std::span<const PlotSeries> series, const PlotOptions& options) {
  const double w = options.width;
  const double h = options.height;
  const double left = 70, right = 20, top = 40, bottom = 55;
  const Axis ax = make_axis(series, true, options.log_x);
  const Axis ay = make_axis(series, false, options.log_y);
  auto px = [&](double v) { return left + (ax.map(v) - ax.lo) / (ax.hi - ax.lo) * (w - left - right); };
  auto py = [&](double v) { return h - bottom - (ay.map(v) - ay.lo) / (ay.hi - ay.lo) * (h - top - bottom); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << w / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
     << escape(options.title) << "</text>\n";
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << w - left - right << "\" height=\""
     << h - top - bottom << "\" fill=\"none\" stroke=\"#333\"/>\n";

  for (int k = 0; k <= 4; ++k) {
    const double fx = ax.lo + (ax.hi - ax.lo) * k / 4.0;
    const double fy = ay.lo + (ay.hi - ay.lo) * k / 4.0;
    const double sx = left + (w - left - right) * k / 4.0;
    const double sy = h - bottom - (h - top - bottom) * k / 4.0;
    os << "<text x=\"" << sx << "\" y=\"" << h - bottom + 16 << "\" text-anchor=\"middle\">"
       << fmt(ax.log ? std::pow(10.0, fx) : fx) << "</text>\n";
    os << "<text x=\"" << left - 6 << "\" y=\"" << sy + 4 << "\" text-anchor=\"end\">"
       << fmt(ay.log ? std::pow(10.0, fy) : fy) << "</text>\n";
  }
  os << "<text x=\"" << (left + w - right) / 2 << "\" y=\"" << h - 12 << "\" text-anchor=\"middle\">"
     << escape(options.x_label) << "</text>\n";
  os << "<text transform=\"translate(16," << (top + h - bottom) / 2
     << ") rotate(-90)\" text-anchor=\"middle\">" << escape(options.y_label) << "</text>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    if (s.x.size() != s.y.size()) throw DimError("plot series x/y length mismatch");
    const std::string color = kPalette[si % std::size(kPalette)];
    double cmin = 0.0;
    double cmax = 1.0;
    const bool colored = s.color_values.size() == s.x.size() && !s.x.empty();
    if (colored) {
      cmin = *std::min_element(s.color_values.begin(), s.color_values.end());
      cmax = *std::max_element(s.color_values.begin(), s.color_values.end());
      if (cmax - cmin < 1e-300) cmax = cmin + 1.0;
    }
    if (s.line) {
      os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
        if ((ax.log && s.x[i] <= 0.0) || (ay.log && s.y[i] <= 0.0)) continue;
        os << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
      }
      os << "\"/>\n";
    }
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      if ((ax.log && s.x[i] <= 0.0) || (ay.log && s.y[i] <= 0.0)) continue;
      const std::string fill = colored ? ramp((s.color_values[i] - cmin) / (cmax - cmin)) : color;
      os << "<circle cx=\"" << px(s.x[i]) << "\" cy=\"" << py(s.y[i]) << "\" r=\""
         << (s.line ? 3 : 1.6) << "\" fill=\"" << fill << "\"/>\n";
    }
    const double ly = top + 16 + 16 * static_cast<double>(si);
    os << "<rect x=\"" << w - right - 130 << "\" y=\"" << ly - 9 << "\" width=\"10\" height=\"10\" fill=\""
       << color << "\"/>\n";
    os << "<text x=\"" << w - right - 115 << "\" y=\"" << ly << "\">" << escape(s.label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace roseland
