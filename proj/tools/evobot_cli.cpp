#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "evobot/evobot.hpp"

namespace fs = std::filesystem;
using namespace evobot;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string robots_path(const std::string& dir) { return (fs::path(dir) / "robots.csv").string(); }

std::vector<RobotRow> load_robots(const std::string& dir) { return read_file(robots_path(dir), read_robots_csv); }

void print_group(const GroupStats& g, const char* what) {
  if (!g.stats) {
    std::printf("  %-10s n=0\n", g.experiment.c_str());
    return;
  }
  std::printf("  %-10s n=%-5zu mean %s=%.4f sd=%.4f\n", g.experiment.c_str(), g.n, what, g.stats->mean, g.stats->sd);
}

void print_welch(const std::vector<GroupStats>& groups) {
  if (groups.size() != 2) return;
  const auto& a = groups[0];
  const auto& b = groups[1];
  if (!a.stats || !b.stats || a.n < 2 || b.n < 2 || (a.stats->sd == 0.0 && b.stats->sd == 0.0)) {
    std::printf("  welch: not enough data\n");
    return;
  }
  const auto w = welch_t(*a.stats, *b.stats);
  std::printf("  welch %s vs %s: t=%.4f df=%.2f p=%.4g\n", a.experiment.c_str(), b.experiment.c_str(), w.t, w.df,
              w.p_two_sided);
}

void print_tables(const std::vector<RobotRow>& last, double speed_thr, std::size_t joints_thr) {
  const auto t = size_speed_table(last, speed_thr, joints_thr);
  std::printf("joints of robots faster than %g cm/s\n", speed_thr);
  for (const auto& g : t.joints_of_fast) print_group(g, "joints");
  print_welch(t.joints_of_fast);
  std::printf("speed of robots with at least %zu joints\n", joints_thr);
  for (const auto& g : t.speed_of_large) print_group(g, "speed");
  print_welch(t.speed_of_large);
}

int cmd_run(const std::string& config, const std::vector<std::string>& sets) {
  const auto cfg = load_config(config, sets);
  fs::create_directories(cfg.output_dir);
  std::vector<RobotRow> rows;
  for (auto mode : cfg.modes) {
    const auto progress = [&](ExperimentMode m, std::size_t run, std::size_t gen, const auto&) {
      if (gen == cfg.setup.evolution.generations)
        std::fprintf(stderr, "%s: run %zu/%zu done\n", std::string(to_string(m)).c_str(), run + 1,
                     cfg.setup.repetitions);
    };
    auto part = run_experiment(cfg.setup, mode, progress);
    rows.insert(rows.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  const auto out = robots_path(cfg.output_dir);
  write_file(out, write_robots_csv, rows);
  std::printf("wrote %zu rows to %s\n", rows.size(), out.c_str());
  return 0;
}

int cmd_calibrate(const std::string& config, const std::vector<std::string>& sets, std::size_t samples) {
  const auto cfg = load_config(config, sets);
  const auto& s = cfg.setup;
  const auto r = calibrate_cstart(s.sim, samples, s.evolution.master_seed, s.rewrite, s.limits);
  std::printf("samples %zu\nmean consumption %.6g\nc_start %.6g\n", r.samples, r.mean_consumption, r.c_start);
  return 0;
}

int cmd_stats(const std::string& dir, double speed_thr, std::size_t joints_thr) {
  const auto rows = load_robots(dir);
  if (rows.empty()) throw std::runtime_error("robots.csv has no rows");
  const auto summary = summarize_generations(rows);
  const auto out = (fs::path(dir) / "summary.csv").string();
  write_file(out, write_summary_csv, summary);
  std::printf("wrote %zu rows to %s\n", summary.size(), out.c_str());

  const auto last = final_generation(rows);
  std::printf("\nfinal generation medians\n");
  for (const auto& exp : experiments_in(last)) {
    std::vector<double> speed, battery, balance;
    for (const auto& r : last) {
      if (r.experiment != exp) continue;
      speed.push_back(r.speed_cms);
      battery.push_back(r.battery_remaining);
      balance.push_back(r.balance);
    }
    std::printf("  %-10s speed=%.4f battery=%.4f balance=%.4f\n", exp.c_str(), median(speed), median(battery),
                median(balance));
  }
  std::printf("\n");
  print_tables(last, speed_thr, joints_thr);

  std::vector<double> speeds;
  for (const auto& r : last) speeds.push_back(r.speed_cms);
  const double data_thr = median(speeds);
  std::printf("\nusing the pooled median speed %.4f as threshold\n", data_thr);
  print_tables(last, data_thr, joints_thr);
  return 0;
}

int cmd_pareto(const std::string& dir) {
  const auto flagged = extract_pareto(load_robots(dir));
  const auto out = (fs::path(dir) / "pareto.csv").string();
  write_file(out, write_pareto_csv, flagged);
  std::size_t nd = 0;
  for (const auto& p : flagged) nd += p.nondominated;
  std::printf("wrote %zu rows (%zu nondominated) to %s\n", flagged.size(), nd, out.c_str());
  return 0;
}

int cmd_plot(const std::string& dir, const std::string& metric) {
  const auto summary_csv = fs::path(dir) / "summary.csv";
  const auto summary = fs::exists(summary_csv) ? read_file(summary_csv.string(), read_summary_csv)
                                               : summarize_generations(load_robots(dir));
  const auto out = (fs::path(dir) / (metric + ".svg")).string();
  emit_svg_plot(summary, metric, out);
  std::printf("wrote %s\n", out.c_str());
  return 0;
}

int cmd_simulate(const std::string& genotype_file, const std::string& config, const std::vector<std::string>& sets,
                 const std::string& trace_path, bool dump_body) {
  const auto cfg = config.empty() ? parse_config("", sets) : load_config(config, sets);
  std::ifstream in(genotype_file);
  if (!in) throw UsageError("cannot read genotype file '" + genotype_file + "'");
  std::stringstream text;
  text << in.rdbuf();
  const auto g = parse_genotype(text.str());
  const auto body = decode(g, cfg.setup.rewrite, cfg.setup.limits);
  if (dump_body) dump(std::cout, body);
  std::ofstream trace;
  if (!trace_path.empty()) {
    trace.open(trace_path);
    if (!trace) throw std::runtime_error("cannot open " + trace_path);
  }
  const auto r = simulate(body, cfg.setup.sim, trace_path.empty() ? nullptr : &trace);
  std::printf("speed_cms %.6g\nbattery_remaining %.6g\nbalance %.6g\nalive_steps %zu\nenergy_used %.6g\n", r.speed,
              r.battery_remaining, r.balance, r.alive_steps, r.energy_used);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Co-evolution of modular robot bodies and gaits, with an optional battery objective"};
  app.require_subcommand(1);

  std::string config, dir, metric, genotype_file, trace_path;
  std::vector<std::string> sets;
  std::size_t samples = 10, joints_thr = 9;
  double speed_thr = 7.0;
  bool dump_body = false;
  SummaryStats a, b;
  a.n = b.n = 0;

  auto* run = app.add_subcommand("run", "Run the configured experiments and write robots.csv");
  run->add_option("--config", config, "Config file")->required()->check(CLI::ExistingFile);
  run->add_option("--set", sets, "Override a config key (key=value)");

  auto* cal = app.add_subcommand("calibrate", "Estimate the initial battery charge from maximum-size robots");
  cal->add_option("--config", config, "Config file")->required()->check(CLI::ExistingFile);
  cal->add_option("--set", sets, "Override a config key (key=value)");
  cal->add_option("--samples", samples, "Number of maximum-size robots")->check(CLI::PositiveNumber);

  auto* stats = app.add_subcommand("stats", "Write summary.csv and print final-generation tables");
  stats->add_option("--in", dir, "Directory holding robots.csv")->required()->check(CLI::ExistingDirectory);
  stats->add_option("--speed-threshold", speed_thr, "Speed threshold in cm/s");
  stats->add_option("--joints-threshold", joints_thr, "Minimum joint count");

  auto* pareto = app.add_subcommand("pareto", "Flag nondominated final-generation robots into pareto.csv");
  pareto->add_option("--in", dir, "Directory holding robots.csv")->required()->check(CLI::ExistingDirectory);

  auto* ttest = app.add_subcommand("ttest", "Welch's t-test from summary statistics");
  ttest->add_option("--mean-a", a.mean)->required();
  ttest->add_option("--sd-a", a.sd)->required();
  ttest->add_option("--n-a", a.n)->required();
  ttest->add_option("--mean-b", b.mean)->required();
  ttest->add_option("--sd-b", b.sd)->required();
  ttest->add_option("--n-b", b.n)->required();

  auto* plot = app.add_subcommand("plot", "Render median and quartile bands per generation as SVG");
  plot->add_option("--in", dir, "Directory holding robots.csv or summary.csv")
      ->required()
      ->check(CLI::ExistingDirectory);
  plot->add_option("--metric", metric, "Metric to plot")->required()->check(CLI::IsMember({"speed", "battery", "balance"}));

  auto* sim = app.add_subcommand("simulate", "Evaluate one genotype file");
  sim->add_option("--genotype", genotype_file, "Genotype text, one rule per line")->required();
  sim->add_option("--config", config, "Config file")->check(CLI::ExistingFile);
  sim->add_option("--set", sets, "Override a config key (key=value)");
  sim->add_option("--trace", trace_path, "Write a per-step CSV trace");
  sim->add_flag("--dump-body", dump_body, "Print the decoded body");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*run) return cmd_run(config, sets);
    if (*cal) return cmd_calibrate(config, sets, samples);
    if (*stats) return cmd_stats(dir, speed_thr, joints_thr);
    if (*pareto) return cmd_pareto(dir);
    if (*plot) return cmd_plot(dir, metric);
    if (*sim) return cmd_simulate(genotype_file, config, sets, trace_path, dump_body);
    if (*ttest) {
      const auto w = welch_t(a, b);
      std::printf("t %.6f\ndf %.6f\np %.6g\n", w.t, w.df, w.p_two_sided);
      return 0;
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 1;
}
