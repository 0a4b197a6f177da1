// Copyright 2026 The cmeval Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <array>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "cmeval/discrimination.hpp"

namespace cmeval::svg {

struct PlotLine {
  std::string label;
  std::vector<std::pair<double, double>> points;             // crossings (c_x, c_y)
  std::vector<std::pair<double, Preference>> no_crossing;   // (c_x, constant preference)
};

struct PlotDocument {
  std::string title;
  std::string x_label = "c_x (x series: error in all classes)";
  std::string y_label = "c_y (y series: error in class 1 only)";
  std::vector<PlotLine> lines;
};

inline PlotLine to_plot_line(std::string label, const std::vector<LinePoint>& points) {
  PlotLine out{std::move(label), {}, {}};
  for (const auto& pt : points) {
    if (pt.status == PointStatus::Crossing && pt.c_y) {
      out.points.emplace_back(pt.c_x, *pt.c_y);
    } else if (pt.status == PointStatus::NoCrossing && pt.preference) {
      out.no_crossing.emplace_back(pt.c_x, *pt.preference);
    }
  }
  return out;
}

namespace detail {

inline std::string escape(const std::string& s) {
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

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace detail

/// Static figure: unit square, y = x reference, one polyline per line.
/// No-crossing grid points are drawn as markers along the bottom edge
/// (y series preferred) or the top edge (x series preferred).
inline std::string render(const PlotDocument& doc) {
  constexpr double W = 560, H = 480, left = 60, top = 40, side = 380;
  constexpr std::array<const char*, 8> palette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                  "#9467bd", "#8c564b", "#e377c2", "#17becf"};
  auto px = [&](double x) { return left + std::clamp(x, 0.0, 1.0) * side; };
  auto py = [&](double y) { return top + (1.0 - std::clamp(y, 0.0, 1.0)) * side; };
  using detail::fmt;

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(W) + "\" height=\"" + fmt(H) +
       "\" viewBox=\"0 0 " + fmt(W) + " " + fmt(H) + "\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"" + fmt(W) + "\" height=\"" + fmt(H) + "\" fill=\"white\"/>\n";
  s += "<text x=\"" + fmt(left + side / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" +
       detail::escape(doc.title) + "</text>\n";
  s += "<rect class=\"frame\" x=\"" + fmt(left) + "\" y=\"" + fmt(top) + "\" width=\"" + fmt(side) +
       "\" height=\"" + fmt(side) + "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 10; t += 2) {
    const double v = t / 10.0;
    s += "<text x=\"" + fmt(px(v)) + "\" y=\"" + fmt(top + side + 16) +
         "\" text-anchor=\"middle\" font-size=\"10\">" + fmt(v).substr(0, 3) + "</text>\n";
    s += "<text x=\"" + fmt(left - 6) + "\" y=\"" + fmt(py(v) + 3) +
         "\" text-anchor=\"end\" font-size=\"10\">" + fmt(v).substr(0, 3) + "</text>\n";
  }
  s += "<line class=\"diagonal\" x1=\"" + fmt(px(0)) + "\" y1=\"" + fmt(py(0)) + "\" x2=\"" + fmt(px(1)) +
       "\" y2=\"" + fmt(py(1)) + "\" stroke=\"gray\" stroke-dasharray=\"4,4\"/>\n";
  s += "<text x=\"" + fmt(left + side / 2) + "\" y=\"" + fmt(top + side + 34) +
       "\" text-anchor=\"middle\" font-size=\"12\">" + detail::escape(doc.x_label) + "</text>\n";
  s += "<text x=\"16\" y=\"" + fmt(top + side / 2) + "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 " +
       fmt(top + side / 2) + ")\">" + detail::escape(doc.y_label) + "</text>\n";

  for (std::size_t n = 0; n < doc.lines.size(); ++n) {
    const auto& line = doc.lines[n];
    const char* color = palette[n % palette.size()];
    if (!line.points.empty()) {
      s += "<polyline class=\"line\" fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < line.points.size(); ++i) {
        if (i) s += ' ';
        s += fmt(px(line.points[i].first)) + "," + fmt(py(line.points[i].second));
      }
      s += "\"/>\n";
    }
    for (const auto& [c_x, pref] : line.no_crossing) {
      const double y = pref == Preference::First ? 1.0 : 0.0;
      s += "<circle class=\"no-crossing\" cx=\"" + fmt(px(c_x)) + "\" cy=\"" + fmt(py(y)) +
           "\" r=\"1.5\" fill=\"" + std::string(color) + "\"/>\n";
    }
    const double ly = top + 14 + 16 * static_cast<double>(n);
    s += "<line x1=\"" + fmt(left + side + 10) + "\" y1=\"" + fmt(ly - 4) + "\" x2=\"" + fmt(left + side + 28) +
         "\" y2=\"" + fmt(ly - 4) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    s += "<text x=\"" + fmt(left + side + 32) + "\" y=\"" + fmt(ly) + "\" font-size=\"11\">" +
         detail::escape(line.label) + "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

}  // namespace cmeval::svg
