// Acceptance checks. Prints one [PASS]/[FAIL] line per criterion and exits
// non-zero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "evobot/evobot.hpp"

using namespace evobot;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(const char* id, bool ok, const std::string& detail) {
  std::printf("[%s] %s %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// ---------------------------------------------------------------------------

struct ConstantDrain {
  double per_step;
  double advance(double) { return per_step; }
  double yaw_rate() const { return 0.0; }
  Vec2 position() const { return {}; }
  double heading() const { return 0.0; }
};

void ac1_battery_arithmetic() {
  bool ok = true;
  const std::vector<JointLoad> a{{2, 0.5}, {1, -1}, {-3, 0.2}}, b{{2, 0}, {-5, 0}}, c{{4, 0.25}};
  ok &= std::abs(compute_power(a) - 1.0) <= 1e-12;
  ok &= std::abs(compute_power(b) - 0.0) <= 1e-12;
  ok &= std::abs(compute_power(c) - 1.0) <= 1e-12;

  // Accumulation: E = c_start - sum of draws, clamped at zero.
  BatteryState bat(10.0);
  const double draws[] = {0.07 * 0.05, 1.0, 0.25, 3.5};
  double expected = 10.0;
  for (double d : draws) {
    bat.drain(d);
    expected -= d;
    ok &= std::abs(bat.remaining() - expected) <= 1e-12;
  }

  SimConfig cfg;
  cfg.c_start = 10.0;
  ConstantDrain plant{0.5};
  const auto r = run_episode(plant, cfg);
  ok &= r.alive_steps == 20 && r.battery_remaining == 0.0;
  report("AC1", ok, fmt("battery arithmetic exact; constant drain stops at step %zu", r.alive_steps));
}

// ---------------------------------------------------------------------------

std::vector<Front> peel_fronts(const std::vector<ObjectiveVector>& pts) {
  std::vector<Front> fronts;
  std::vector<bool> removed(pts.size(), false);
  std::size_t left = pts.size();
  while (left > 0) {
    Front f;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (removed[i]) continue;
      bool dominated = false;
      for (std::size_t j = 0; j < pts.size() && !dominated; ++j)
        dominated = !removed[j] && j != i && pts[j][0] >= pts[i][0] && pts[j][1] >= pts[i][1] &&
                    (pts[j][0] > pts[i][0] || pts[j][1] > pts[i][1]);
      if (!dominated) f.push_back(i);
    }
    for (auto i : f) removed[i] = true;
    left -= f.size();
    fronts.push_back(f);
  }
  return fronts;
}

void ac2_sort_oracle() {
  const auto t0 = Clock::now();
  auto rng = make_rng(derive_seed({2, 2024}));
  std::uniform_int_distribution<int> coarse(0, 7);
  std::uniform_real_distribution<double> fine(0, 1);
  std::size_t mismatches = 0, with_duplicates = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + uniform_index(rng, 63);
    std::vector<ObjectiveVector> pts(n);
    for (auto& p : pts) p = trial % 2 ? ObjectiveVector{double(coarse(rng)), double(coarse(rng))}
                                      : ObjectiveVector{fine(rng), fine(rng)};
    // Force at least one duplicated point.
    const auto src = uniform_index(rng, n);
    pts[(src + 1 + uniform_index(rng, n - 1)) % n] = pts[src];
    with_duplicates += std::set<ObjectiveVector>(pts.begin(), pts.end()).size() < n;
    mismatches += fast_nondominated_sort(pts) != peel_fronts(pts);
  }
  const double secs = seconds_since(t0);
  report("AC2", mismatches == 0 && secs < 5.0,
         fmt("200 populations, %zu with duplicates, %zu mismatches, %.3f s", with_duplicates, mismatches, secs));
}

// ---------------------------------------------------------------------------

struct Empty {};

/// Maximize (x, 1 - x^2) over x in [0, 1].
struct AnalyticProblem {
  using genotype_type = double;
  using payload_type = Empty;
  double random_genotype(Rng& rng) const { return std::uniform_real_distribution<double>(0, 1)(rng); }
  double crossover(double a, double b, Rng& rng) const {
    const double w = std::uniform_real_distribution<double>(0, 1)(rng);
    return w * a + (1 - w) * b;
  }
  double mutate(double x, Rng& rng) const {
    return std::clamp(x + std::normal_distribution<double>(0, 0.1)(rng), 0.0, 1.0);
  }
  Evaluation<Empty> evaluate(double x) const { return {{x, 1 - x * x}, {}}; }
};

void ac3_convergence() {
  const auto t0 = Clock::now();
  EvolutionConfig cfg;
  cfg.mu = 40;
  cfg.lambda = 40;
  cfg.generations = 50;
  Evolution<AnalyticProblem> evo(AnalyticProblem{}, cfg);
  const std::uint64_t seed = derive_seed({3, 1});
  auto pop = evo.initialize(seed);
  for (std::size_t g = 1; g <= cfg.generations; ++g) pop = evo.next_generation(pop, seed, g);

  std::vector<std::pair<double, double>> found;
  for (const auto& i : pop)
    if (i.rank == 0) found.emplace_back(i.objectives[0], i.objectives[1]);
  std::vector<std::pair<double, double>> dense;
  for (int i = 0; i <= 100000; ++i) {
    const double x = i / 100000.0;
    dense.emplace_back(x, 1 - x * x);
  }
  const double hv = hypervolume_2d(found, {0, 0});
  const double hv_true = hypervolume_2d(dense, {0, 0});
  const double secs = seconds_since(t0);
  report("AC3", hv >= 0.95 * hv_true && secs < 10.0,
         fmt("hypervolume %.5f of %.5f (%.2f%%), %zu front points, %.3f s", hv, hv_true, 100 * hv / hv_true,
             found.size(), secs));
}

// ---------------------------------------------------------------------------

ExperimentSetup desk_setup(std::size_t threads) {
  ExperimentSetup s;
  s.evolution.mu = 24;
  s.evolution.lambda = 24;
  s.evolution.generations = 40;
  s.evolution.master_seed = 1;
  s.evolution.threads = threads;
  s.repetitions = 5;
  return s;
}

std::vector<RobotRow> desk_run(std::size_t threads) {
  const auto setup = desk_setup(threads);
  auto rows = run_experiment(setup, ExperimentMode::Baseline);
  const auto more = run_experiment(setup, ExperimentMode::Battery);
  rows.insert(rows.end(), more.begin(), more.end());
  return rows;
}

std::string as_csv(const std::vector<RobotRow>& rows) {
  std::ostringstream os;
  write_robots_csv(os, rows);
  return os.str();
}

void ac4_trends(const std::vector<RobotRow>& rows, double secs) {
  const double c_start = desk_setup(1).sim.c_start;
  const auto last = final_generation(rows);
  auto pick = [&](const std::string& exp, auto field) {
    std::vector<double> v;
    for (const auto& r : last)
      if (r.experiment == exp) v.push_back(field(r));
    return v;
  };
  auto speed = [](const RobotRow& r) { return r.speed_cms; };
  auto battery = [](const RobotRow& r) { return r.battery_remaining; };
  auto joints = [](const RobotRow& r) { return static_cast<double>(r.n_joints); };
  auto mean = [](const std::vector<double>& v) { return summarize(v)->mean; };

  const double ms_base = median(pick("baseline", speed)), ms_batt = median(pick("battery", speed));
  const double mb_base = median(pick("baseline", battery)), mb_batt = median(pick("battery", battery));
  const double mj_base = mean(pick("baseline", joints)), mj_batt = mean(pick("battery", joints));

  std::vector<RobotRow> battery_rows;
  for (const auto& r : rows)
    if (r.experiment == "battery") battery_rows.push_back(r);
  std::size_t idle_on_front = 0;
  for (const auto& p : extract_pareto(battery_rows))
    idle_on_front += p.nondominated && p.robot.speed_cms == 0.0 && p.robot.battery_remaining == c_start;

  const bool a = ms_base > ms_batt, b = mb_batt > mb_base, c = idle_on_front >= 1, d = mj_batt <= mj_base;
  report("AC4", a && b && c && d && secs < 600.0,
         fmt("(a) median speed %.3f > %.3f %s; (b) median battery %.3f > %.3f %s; (c) %zu idle robots on front %s; "
             "(d) mean joints %.2f <= %.2f %s; %.1f s",
             ms_base, ms_batt, a ? "ok" : "NO", mb_batt, mb_base, b ? "ok" : "NO", idle_on_front, c ? "ok" : "NO",
             mj_batt, mj_base, d ? "ok" : "NO", secs));
}

// ---------------------------------------------------------------------------

void ac5_welch() {
  auto direct_t = [](double ma, double sa, double na, double mb, double sb, double nb) {
    return (ma - mb) / std::sqrt(sa * sa / na + sb * sb / nb);
  };
  const auto t2 = welch_t({71, 5.35, 1.29}, {940, 4.33, 2.0});
  const auto t1 = welch_t({9, 7.44, 2.35}, {91, 8.88, 0.32});
  const double d2 = direct_t(5.35, 1.29, 71, 4.33, 2.0, 940);
  const double d1 = direct_t(7.44, 2.35, 9, 8.88, 0.32, 91);
  const bool ok = t2.p_two_sided < 0.001 && t1.p_two_sided > 0.05 && std::abs(t2.t - d2) <= 0.05 &&
                  std::abs(t1.t - d1) <= 0.05 && std::abs(t2.t - 6.13) <= 0.05 &&
                  std::abs(std::abs(t1.t) - 1.84) <= 0.05;
  report("AC5", ok,
         fmt("joints>=9 speeds: t=%.3f df=%.1f p=%.3g; fast robots' joints: t=%.3f df=%.2f p=%.3f", t2.t, t2.df,
             t2.p_two_sided, t1.t, t1.df, t1.p_two_sided));
}

// ---------------------------------------------------------------------------

void ac6_determinism(const std::string& reference) {
  const auto again = as_csv(desk_run(1));
  const auto threaded = as_csv(desk_run(4));
  const bool ok = again == reference && threaded == reference;
  report("AC6", ok,
         fmt("robots.csv %zu bytes; rerun %s, 4 threads %s", reference.size(), again == reference ? "identical" : "DIFFERS",
             threaded == reference ? "identical" : "DIFFERS"));
}

// ---------------------------------------------------------------------------

struct Recording {
  RobotPlant inner;
  std::vector<double> deltas;
  double advance(double t) {
    deltas.push_back(inner.advance(t));
    return deltas.back();
  }
  double yaw_rate() const { return inner.yaw_rate(); }
  Vec2 position() const { return inner.position(); }
  double heading() const { return inner.heading(); }
};

void ac7_invariants() {
  constexpr int N = 10000;
  std::vector<std::string> broken;
  auto rng = make_rng(derive_seed({7, 1}));

  // Genotype closure under mutate and crossover.
  {
    int bad = 0;
    Genotype a = random_genotype(rng), b = random_genotype(rng);
    for (int i = 0; i < N; ++i) {
      const auto m = mutate(a, rng);
      const auto c = crossover(m, b, rng);
      bad += !is_valid(m) || !is_valid(c);
      a = i % 100 == 0 ? random_genotype(rng) : m;
      b = i % 3 == 0 ? c : b;
    }
    if (bad) broken.push_back(fmt("closure(%d)", bad));
  }

  // Decode: no overlap, limits respected.
  const BodyLimits limits;
  std::vector<Genotype> genotypes;
  {
    int bad = 0;
    for (int i = 0; i < N; ++i) {
      auto g = random_genotype(rng);
      for (int k = 0; k < i % 4; ++k) g = mutate(g, rng);
      const auto body = decode(g, RewriteConfig{}, limits);
      std::set<GridVec> cells;
      for (const auto& m : body.modules) bad += !cells.insert(m.grid_pos).second;
      bad += body.n_joints > limits.max_joints || body.n_bricks > limits.max_bricks;
      genotypes.push_back(std::move(g));
    }
    if (bad) broken.push_back(fmt("decode(%d)", bad));
  }

  // Battery, balance and speed over full simulations.
  {
    SimConfig cfg;
    int bad_battery = 0, bad_balance = 0, bad_speed = 0;
    for (const auto& g : genotypes) {
      Recording plant{RobotPlant(RobotModel::from(decode(g, RewriteConfig{}, limits), cfg), cfg), {}};
      const auto r = run_episode(plant, cfg);
      double e = cfg.c_start;
      for (double d : plant.deltas) {
        const double next = std::max(0.0, e - d);
        bad_battery += d < 0.0 || next > e;
        e = next;
      }
      bad_battery += !(r.battery_remaining >= 0.0 && r.battery_remaining <= cfg.c_start);
      bad_balance += !(r.balance >= 0.0 && r.balance <= 1.0);
      bad_speed += !(r.speed >= 0.0);
    }
    if (bad_battery) broken.push_back(fmt("battery(%d)", bad_battery));
    if (bad_balance) broken.push_back(fmt("balance(%d)", bad_balance));
    if (bad_speed) broken.push_back(fmt("speed(%d)", bad_speed));
  }

  // Crowding boundaries.
  {
    int bad = 0;
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < N; ++i) {
      std::vector<ObjectiveVector> front(2 + uniform_index(rng, 30));
      for (auto& p : front) p = {u(rng), u(rng)};
      const auto d = crowding_distance(front);
      for (std::size_t obj = 0; obj < 2; ++obj) {
        auto lo = 0u, hi = 0u;
        for (std::size_t j = 1; j < front.size(); ++j) {
          if (front[j][obj] < front[lo][obj]) lo = static_cast<unsigned>(j);
          if (front[j][obj] > front[hi][obj]) hi = static_cast<unsigned>(j);
        }
        bad += !std::isinf(d[lo]) || !std::isinf(d[hi]);
      }
    }
    if (bad) broken.push_back(fmt("crowding(%d)", bad));
  }

  std::string detail = fmt("%d inputs per invariant", N);
  for (const auto& b : broken) detail += " " + b;
  report("AC7", broken.empty(), detail);
}

// ---------------------------------------------------------------------------

void ac8_calibration() {
  const auto r = calibrate_cstart(8, 42, RewriteConfig{}, BodyLimits{}, [](const BodyGraph&) { return 12.0; });
  report("AC8", std::abs(r.c_start - 10.0) <= 1e-9, fmt("stubbed consumption 12 gives c_start %.12f", r.c_start));
}

}  // namespace

int main() {
  try {
    ac1_battery_arithmetic();
    ac2_sort_oracle();
    ac3_convergence();
    const auto t0 = Clock::now();
    const auto rows = desk_run(1);
    ac4_trends(rows, seconds_since(t0));
    ac5_welch();
    ac6_determinism(as_csv(rows));
    ac7_invariants();
    ac8_calibration();
  } catch (const std::exception& e) {
    std::printf("[FAIL] acceptance aborted: %s\n", e.what());
    return 1;
  }
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
