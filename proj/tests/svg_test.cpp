#include "evobot/svg.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <regex>
#include <stack>

using namespace evobot;

namespace {

std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1)) ++n;
  return n;
}

/// Minimal tag balance check: every opened element is closed in order.
bool tags_balanced(const std::string& xml) {
  std::stack<std::string> open;
  const std::regex tag(R"(<(/?)([a-zA-Z]+)[^>]*?(/?)>)");
  for (auto it = std::sregex_iterator(xml.begin(), xml.end(), tag); it != std::sregex_iterator(); ++it) {
    const auto& m = *it;
    if (m[3] == "/") continue;
    if (m[1] == "/") {
      if (open.empty() || open.top() != m[2]) return false;
      open.pop();
    } else {
      open.push(m[2]);
    }
  }
  return open.empty();
}

std::vector<SummaryRow> series(const std::string& exp, std::size_t gens) {
  std::vector<SummaryRow> rows;
  for (std::size_t g = 1; g <= gens; ++g) {
    const double m = std::log(static_cast<double>(g));
    rows.push_back({exp, g, "speed", m, m - 0.5, m + 0.5});
    rows.push_back({exp, g, "battery", 1, 0, 2});
  }
  return rows;
}

}  // namespace

TEST(Svg, OneBandAndLinePerExperiment) {
  auto rows = series("baseline", 50);
  const auto more = series("battery", 50);
  rows.insert(rows.end(), more.begin(), more.end());
  const auto svg = render_svg_plot(rows, "speed");
  EXPECT_EQ(count(svg, "<polyline class=\"median\""), 2u);
  EXPECT_EQ(count(svg, "<polygon class=\"band\""), 2u);
  EXPECT_EQ(count(svg, "<g class=\"series\""), 2u);
  EXPECT_NE(svg.find(">baseline</text>"), std::string::npos);
  EXPECT_NE(svg.find(">battery</text>"), std::string::npos);
  EXPECT_TRUE(tags_balanced(svg));
  EXPECT_EQ(svg.rfind("<?xml", 0), 0u);
}

TEST(Svg, SingleGenerationUsesMarkers) {
  const auto svg = render_svg_plot(series("baseline", 1), "speed");
  EXPECT_EQ(count(svg, "<circle class=\"median\""), 1u);
  EXPECT_EQ(count(svg, "<line class=\"band\""), 1u);
  EXPECT_EQ(count(svg, "<polyline"), 0u);
  EXPECT_TRUE(tags_balanced(svg));
}

TEST(Svg, FlatSeriesStillRenders) {
  const auto svg = render_svg_plot(series("baseline", 10), "battery");
  EXPECT_EQ(svg.find("nan"), std::string::npos);
  EXPECT_EQ(svg.find("inf"), std::string::npos);
}

TEST(Svg, MissingMetricThrows) {
  EXPECT_THROW(render_svg_plot({}, "speed"), std::invalid_argument);
  EXPECT_THROW(render_svg_plot(series("baseline", 3), "balance"), std::invalid_argument);
}

TEST(Svg, EscapesNames) {
  const auto svg = render_svg_plot(series("a<b&c", 3), "speed");
  EXPECT_NE(svg.find("a&lt;b&amp;c"), std::string::npos);
  EXPECT_TRUE(tags_balanced(svg));
}
