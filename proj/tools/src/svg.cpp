#include "sdrift/experiment/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace sdrift::experiment {

namespace {

constexpr double kWidth = 640.0, kHeight = 400.0;
constexpr double kLeft = 90.0, kRight = 20.0, kTop = 60.0, kBottom = 60.0;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
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

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad(double frac) {
    if (!(lo <= hi)) lo = 0.0, hi = 1.0;
    if (hi == lo) lo -= 0.5, hi += 0.5;
    const double m = frac * (hi - lo);
    lo -= m;
    hi += m;
  }
};

}  // namespace

void write_line_chart(std::ostream& os, const ChartSpec& spec, const std::vector<Series>& series) {
  auto tx = [&](double x) { return spec.log_x ? std::log10(x) : x; };
  auto usable = [&](double x, double y) {
    return std::isfinite(y) && std::isfinite(x) && (!spec.log_x || x > 0.0);
  };
  Range rx, ry;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!usable(s.x[i], s.y[i])) continue;
      rx.add(tx(s.x[i]));
      ry.add(s.y[i]);
    }
  }
  rx.pad(0.0);
  ry.pad(0.05);
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (tx(x) - rx.lo) / (rx.hi - rx.lo) * pw; };
  auto py = [&](double y) { return kTop + (ry.hi - y) / (ry.hi - ry.lo) * ph; };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth) << "\" height=\""
     << num(kHeight) << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << num(kWidth / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
     << escape(spec.title) << "</text>\n"
     << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop + ph) << "\" x2=\"" << num(kLeft + pw)
     << "\" y2=\"" << num(kTop + ph) << "\" stroke=\"black\"/>\n"
     << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(kLeft)
     << "\" y2=\"" << num(kTop + ph) << "\" stroke=\"black\"/>\n";

  for (int k = 0; k <= 4; ++k) {
    const double fx = rx.lo + (rx.hi - rx.lo) * k / 4.0;
    const double sx = kLeft + pw * k / 4.0;
    const double label = spec.log_x ? std::pow(10.0, fx) : fx;
    os << "<line x1=\"" << num(sx) << "\" y1=\"" << num(kTop + ph) << "\" x2=\"" << num(sx)
       << "\" y2=\"" << num(kTop + ph + 5) << "\" stroke=\"black\"/>\n"
       << "<text x=\"" << num(sx) << "\" y=\"" << num(kTop + ph + 18)
       << "\" text-anchor=\"middle\">" << num(label) << "</text>\n";
    const double fy = ry.lo + (ry.hi - ry.lo) * k / 4.0;
    const double sy = kTop + ph - ph * k / 4.0;
    os << "<line x1=\"" << num(kLeft - 5) << "\" y1=\"" << num(sy) << "\" x2=\"" << num(kLeft)
       << "\" y2=\"" << num(sy) << "\" stroke=\"black\"/>\n"
       << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(sy + 4) << "\" text-anchor=\"end\">"
       << num(fy) << "</text>\n";
  }
  os << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kHeight - 15)
     << "\" text-anchor=\"middle\">" << escape(spec.x_label) << "</text>\n"
     << "<text x=\"14\" y=\"" << num(kTop + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
     << num(kTop + ph / 2) << ")\">" << escape(spec.y_label) << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* colour = kPalette[s % std::size(kPalette)];
    os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < series[s].x.size() && i < series[s].y.size(); ++i) {
      if (!usable(series[s].x[i], series[s].y[i])) continue;
      os << (first ? "" : " ") << num(px(series[s].x[i])) << ',' << num(py(series[s].y[i]));
      first = false;
    }
    os << "\"/>\n";
    // Legend entries sit in a row between the title and the plot area.
    const double lx = kLeft + 150.0 * static_cast<double>(s);
    const double ly = kTop - 20.0;
    os << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(lx + 20)
       << "\" y2=\"" << num(ly) << "\" stroke=\"" << colour << "\"/>\n"
       << "<text x=\"" << num(lx + 25) << "\" y=\"" << num(ly + 4) << "\">"
       << escape(series[s].name) << "</text>\n";
  }
  os << "</svg>\n";
}

}  // namespace sdrift::experiment
