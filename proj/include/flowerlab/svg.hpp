#ifndef FLOWERLAB_SVG_HPP
#define FLOWERLAB_SVG_HPP

// SVG figures of 2D bodies: one closed polyline per body through its radial
// node points, the unit circle for reference, and a legend.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "flowerlab/bodies.hpp"

namespace flowerlab {

struct PlotItem {
  StarBody body;
  std::string label;
};

namespace detail {

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", std::abs(v) < 5e-13 ? 0.0 : v);
  return buf;
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace detail

inline std::string plot_svg(const std::vector<PlotItem>& items, int size_px = 480) {
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"};
  if (items.empty()) throw Error(ErrorKind::InvalidParameter, "nothing to plot");
  double extent = 1.0;  // the unit circle is always drawn
  for (const auto& it : items) {
    if (it.body.dim() != 2) throw Error(ErrorKind::UnsupportedDimension, "plots need dim 2");
    for (std::size_t i = 0; i < it.body.size(); ++i) {
      const auto d = it.body.grid().direction(i);
      const double r = it.body.radial()[i];
      extent = std::max({extent, std::abs(r * d[0]), std::abs(r * d[1])});
    }
  }
  const double half = extent * 1.1;
  const double px = size_px / (2.0 * half);
  auto sx = [&](double x) { return detail::fmt((x + half) * px); };
  auto sy = [&](double y) { return detail::fmt((half - y) * px); };

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(size_px) + "\" height=\"" +
       std::to_string(size_px) + "\" viewBox=\"0 0 " + std::to_string(size_px) + " " + std::to_string(size_px) + "\">\n";
  s += "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "  <circle cx=\"" + sx(0) + "\" cy=\"" + sy(0) + "\" r=\"" + detail::fmt(px) +
       "\" fill=\"none\" stroke=\"#999999\" stroke-dasharray=\"4 3\"/>\n";
  for (std::size_t k = 0; k < items.size(); ++k) {
    const auto& b = items[k].body;
    s += "  <polygon fill=\"none\" stroke=\"" + std::string(kColors[k % 8]) + "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < b.size(); ++i) {
      const auto d = b.grid().direction(i);
      const double r = b.radial()[i];
      if (i) s += ' ';
      s += sx(r * d[0]) + "," + sy(r * d[1]);
    }
    s += "\"/>\n";
  }
  for (std::size_t k = 0; k < items.size(); ++k) {
    const std::string y = std::to_string(18 + 16 * static_cast<int>(k));
    s += "  <text x=\"10\" y=\"" + y + "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" +
         std::string(kColors[k % 8]) + "\">" + detail::xml_escape(items[k].label) + "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

}  // namespace flowerlab

#endif  // FLOWERLAB_SVG_HPP
