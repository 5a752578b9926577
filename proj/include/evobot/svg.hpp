#pragma once

// Median line + interquartile band plots of per-generation summaries.

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "evobot/records.hpp"

namespace evobot {

namespace detail {
inline std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string svg_escape(std::string_view s) {
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

/// Renders every experiment found in `rows` for `metric` as one series.
inline std::string render_svg_plot(const std::vector<SummaryRow>& rows, std::string_view metric) {
  std::map<std::string, std::vector<SummaryRow>> series;
  for (const auto& r : rows)
    if (r.metric == metric) series[r.experiment].push_back(r);
  if (series.empty()) throw std::invalid_argument("no summaries for metric '" + std::string(metric) + "'");

  double gx0 = 1e300, gx1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (auto& [name, pts] : series) {
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.generation < b.generation; });
    for (const auto& p : pts) {
      gx0 = std::min(gx0, static_cast<double>(p.generation));
      gx1 = std::max(gx1, static_cast<double>(p.generation));
      y0 = std::min(y0, p.q1);
      y1 = std::max(y1, p.q3);
    }
  }
  if (gx1 == gx0) {
    gx0 -= 1;
    gx1 += 1;
  }
  if (y1 == y0) {
    y0 -= 1;
    y1 += 1;
  }

  constexpr double W = 720, H = 440, left = 70, right = 160, top = 30, bottom = 60;
  const double pw = W - left - right, ph = H - top - bottom;
  auto sx = [&](double g) { return left + (g - gx0) / (gx1 - gx0) * pw; };
  auto sy = [&](double v) { return top + (1.0 - (v - y0) / (y1 - y0)) * ph; };
  using detail::svg_num;
  constexpr std::array<const char*, 6> palette{"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" viewBox=\"0 0 " << W << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
     << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";

  // Axes and ticks.
  os << "<g stroke=\"black\" fill=\"none\">"
     << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw << "\" y2=\"" << top + ph
     << "\"/><line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + ph
     << "\"/></g>\n";
  for (int i = 0; i <= 5; ++i) {
    const double g = gx0 + (gx1 - gx0) * i / 5.0;
    const double v = y0 + (y1 - y0) * i / 5.0;
    os << "<text x=\"" << svg_num(sx(g)) << "\" y=\"" << svg_num(top + ph + 18)
       << "\" text-anchor=\"middle\">" << svg_num(g) << "</text>\n";
    os << "<text x=\"" << svg_num(left - 6) << "\" y=\"" << svg_num(sy(v) + 4) << "\" text-anchor=\"end\">"
       << svg_num(v) << "</text>\n";
  }
  os << "<text x=\"" << svg_num(left + pw / 2) << "\" y=\"" << svg_num(H - 15)
     << "\" text-anchor=\"middle\">generation</text>\n";
  os << "<text x=\"18\" y=\"" << svg_num(top + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
     << svg_num(top + ph / 2) << ")\">" << detail::svg_escape(metric) << "</text>\n";

  std::size_t idx = 0;
  for (const auto& [name, pts] : series) {
    const char* color = palette[idx % palette.size()];
    const auto esc = detail::svg_escape(name);
    os << "<g class=\"series\" data-experiment=\"" << esc << "\">\n";
    if (pts.size() == 1) {
      const auto& p = pts.front();
      os << "<line class=\"band\" x1=\"" << svg_num(sx(p.generation)) << "\" y1=\"" << svg_num(sy(p.q1))
         << "\" x2=\"" << svg_num(sx(p.generation)) << "\" y2=\"" << svg_num(sy(p.q3)) << "\" stroke=\""
         << color << "\" stroke-opacity=\"0.4\" stroke-width=\"6\"/>\n";
      os << "<circle class=\"median\" cx=\"" << svg_num(sx(p.generation)) << "\" cy=\""
         << svg_num(sy(p.median)) << "\" r=\"4\" fill=\"" << color << "\"/>\n";
    } else {
      os << "<polygon class=\"band\" fill=\"" << color << "\" fill-opacity=\"0.2\" stroke=\"none\" points=\"";
      for (const auto& p : pts) os << svg_num(sx(p.generation)) << ',' << svg_num(sy(p.q3)) << ' ';
      for (auto it = pts.rbegin(); it != pts.rend(); ++it)
        os << svg_num(sx(it->generation)) << ',' << svg_num(sy(it->q1)) << ' ';
      os << "\"/>\n";
      os << "<polyline class=\"median\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
      for (const auto& p : pts) os << svg_num(sx(p.generation)) << ',' << svg_num(sy(p.median)) << ' ';
      os << "\"/>\n";
    }
    os << "</g>\n";
    const double ly = top + 10 + 20.0 * static_cast<double>(idx);
    os << "<rect x=\"" << svg_num(left + pw + 15) << "\" y=\"" << svg_num(ly - 8) << "\" width=\"14\" height=\"10\" fill=\""
       << color << "\"/><text x=\"" << svg_num(left + pw + 35) << "\" y=\"" << svg_num(ly + 1) << "\">" << esc
       << "</text>\n";
    ++idx;
  }
  os << "</svg>\n";
  return os.str();
}

inline void emit_svg_plot(const std::vector<SummaryRow>& rows, std::string_view metric, const std::string& path) {
  const auto svg = render_svg_plot(rows, metric);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << svg;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace evobot
