#include "evobot/analysis.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace evobot;

namespace {

RobotRow row(std::string exp, std::size_t gen, double speed, double battery, std::size_t joints = 0) {
  RobotRow r;
  r.experiment = std::move(exp);
  r.generation = gen;
  r.speed_cms = speed;
  r.battery_remaining = battery;
  r.balance = 1.0;
  r.n_joints = joints;
  return r;
}

}  // namespace

TEST(SummarizeGenerations, QuartilesPerExperimentAndGeneration) {
  std::vector<RobotRow> rows;
  for (double s : {1, 2, 3, 4, 5}) rows.push_back(row("baseline", 1, s, 10 - s));
  for (double s : {1, 2, 3, 4}) rows.push_back(row("battery", 1, s, 0));
  rows.push_back(row("baseline", 2, 9, 9));
  const auto out = summarize_generations(rows);
  ASSERT_EQ(out.size(), 9u);  // 3 groups x 3 metrics
  auto find = [&](std::string exp, std::size_t g, std::string m) {
    for (const auto& r : out)
      if (r.experiment == exp && r.generation == g && r.metric == m) return r;
    ADD_FAILURE() << exp << g << m;
    return SummaryRow{};
  };
  EXPECT_EQ(find("baseline", 1, "speed").median, 3.0);
  EXPECT_EQ(find("baseline", 1, "speed").q1, 2.0);
  EXPECT_EQ(find("baseline", 1, "battery").q3, 8.0);
  EXPECT_DOUBLE_EQ(find("battery", 1, "speed").q1, 1.75);
  EXPECT_EQ(find("baseline", 2, "balance").median, 1.0);
}

TEST(NondominatedFlags, Examples) {
  EXPECT_EQ(nondominated_flags({{2, 1}, {1, 2}, {1, 1}, {2, 1}}), (std::vector<bool>{true, true, false, true}));
  EXPECT_THROW(nondominated_flags({{1, 2, 3}}), std::invalid_argument);
}

TEST(ExtractPareto, UsesFinalGenerationPerExperiment) {
  std::vector<RobotRow> rows{row("baseline", 1, 100, 100), row("baseline", 2, 1, 5), row("baseline", 2, 2, 1),
                             row("baseline", 2, 0.5, 0.5), row("battery", 3, 1, 1)};
  const auto p = extract_pareto(rows);
  ASSERT_EQ(p.size(), 4u);
  EXPECT_TRUE(p[0].nondominated);
  EXPECT_TRUE(p[1].nondominated);
  EXPECT_FALSE(p[2].nondominated);
  EXPECT_EQ(p[3].robot.experiment, "battery");
  EXPECT_TRUE(p[3].nondominated);
}

TEST(SizeSpeedTable, ThresholdsAndEmptyGroups) {
  std::vector<RobotRow> rows{row("baseline", 5, 8, 0, 9), row("baseline", 5, 7.5, 0, 10),
                             row("baseline", 5, 3, 0, 2), row("battery", 5, 7, 0, 9), row("battery", 5, 1, 0, 1)};
  const auto t = size_speed_table(rows, 7.0, 9);
  ASSERT_EQ(t.joints_of_fast.size(), 2u);
  EXPECT_EQ(t.joints_of_fast[0].n, 2u);
  EXPECT_DOUBLE_EQ(t.joints_of_fast[0].stats->mean, 9.5);
  EXPECT_EQ(t.joints_of_fast[1].n, 0u);  // speed 7 is not above the threshold
  EXPECT_FALSE(t.joints_of_fast[1].stats);
  EXPECT_EQ(t.speed_of_large[0].n, 2u);
  EXPECT_DOUBLE_EQ(t.speed_of_large[0].stats->mean, 7.75);
  EXPECT_EQ(t.speed_of_large[1].n, 1u);
  EXPECT_THROW(size_speed_table({}, 7.0, 9), std::invalid_argument);
}

TEST(FinalGeneration, KeepsLastGenerationOnly) {
  std::vector<RobotRow> rows{row("a", 1, 0, 0), row("a", 3, 0, 0), row("b", 2, 0, 0), row("a", 3, 1, 0)};
  const auto f = final_generation(rows);
  ASSERT_EQ(f.size(), 3u);
  for (const auto& r : f) EXPECT_EQ(r.generation, r.experiment == "a" ? 3u : 2u);
}

TEST(ExtractPareto, MatchesFirstFrontOnRandomTables) {
  auto rng = make_rng(256);
  std::uniform_int_distribution<int> coarse(0, 9);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<RobotRow> rows;
    const std::size_t n = 1 + uniform_index(rng, 256);
    for (std::size_t i = 0; i < n; ++i) rows.push_back(row("battery", 4, coarse(rng), coarse(rng)));
    std::vector<ObjectiveVector> pts;
    for (const auto& r : rows) pts.push_back({r.speed_cms, r.battery_remaining});
    const auto front = fast_nondominated_sort(pts).front();
    const auto flagged = extract_pareto(rows);
    ASSERT_EQ(flagged.size(), n);
    for (std::size_t i = 0; i < n; ++i)
      ASSERT_EQ(flagged[i].nondominated, std::binary_search(front.begin(), front.end(), i));
  }
}
