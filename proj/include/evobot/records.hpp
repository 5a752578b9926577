#pragma once

// CSV tables written by experiment runs: robots.csv, summary.csv, pareto.csv.
// Reals use the shortest round-trip representation, so a table read back is
// value-identical to the one written.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace evobot {

struct RobotRow {
  std::string experiment;
  std::size_t run = 0;
  std::size_t generation = 0;
  std::uint64_t robot_id = 0;
  std::size_t n_modules = 0;
  std::size_t n_bricks = 0;
  std::size_t n_joints = 0;
  std::size_t branching = 0;
  double proportion = 0.0;
  double speed_cms = 0.0;
  double battery_remaining = 0.0;
  double balance = 0.0;
  std::size_t alive_steps = 0;
  std::string genotype;

  friend bool operator==(const RobotRow&, const RobotRow&) = default;
};

struct ParetoRow {
  RobotRow robot;
  bool nondominated = false;

  friend bool operator==(const ParetoRow&, const ParetoRow&) = default;
};

struct SummaryRow {
  std::string experiment;
  std::size_t generation = 0;
  std::string metric;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;

  friend bool operator==(const SummaryRow&, const SummaryRow&) = default;
};

inline constexpr std::string_view kRobotsHeader =
    "experiment,run,generation,robot_id,n_modules,n_bricks,n_joints,branching,proportion,"
    "speed_cms,battery_remaining,balance,alive_steps,genotype";
inline constexpr std::string_view kSummaryHeader = "experiment,generation,metric,median,q1,q3";

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace csv {

inline std::string format_real(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw CsvError("cannot format number");
  return std::string(buf, ptr);
}

inline std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

/// Splits one record; handles quoted fields with doubled quotes.
inline std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  if (quoted) throw CsvError("unterminated quoted field");
  fields.push_back(std::move(cur));
  return fields;
}

inline double parse_real(const std::string& s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw CsvError("bad number '" + s + "'");
  return v;
}

inline std::uint64_t parse_uint(const std::string& s) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw CsvError("bad integer '" + s + "'");
  return v;
}

inline void expect_header(std::istream& in, std::string_view header) {
  std::string line;
  if (!std::getline(in, line)) throw CsvError("missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) throw CsvError("unexpected header: " + line);
}

}  // namespace csv

inline void write_robot_fields(std::ostream& os, const RobotRow& r) {
  os << r.experiment << ',' << r.run << ',' << r.generation << ',' << r.robot_id << ',' << r.n_modules
     << ',' << r.n_bricks << ',' << r.n_joints << ',' << r.branching << ','
     << csv::format_real(r.proportion) << ',' << csv::format_real(r.speed_cms) << ','
     << csv::format_real(r.battery_remaining) << ',' << csv::format_real(r.balance) << ','
     << r.alive_steps << ',' << csv::quote(r.genotype);
}

inline RobotRow parse_robot_fields(const std::vector<std::string>& f) {
  if (f.size() < 14) throw CsvError("robot row has too few fields");
  RobotRow r;
  r.experiment = f[0];
  r.run = csv::parse_uint(f[1]);
  r.generation = csv::parse_uint(f[2]);
  r.robot_id = csv::parse_uint(f[3]);
  r.n_modules = csv::parse_uint(f[4]);
  r.n_bricks = csv::parse_uint(f[5]);
  r.n_joints = csv::parse_uint(f[6]);
  r.branching = csv::parse_uint(f[7]);
  r.proportion = csv::parse_real(f[8]);
  r.speed_cms = csv::parse_real(f[9]);
  r.battery_remaining = csv::parse_real(f[10]);
  r.balance = csv::parse_real(f[11]);
  r.alive_steps = csv::parse_uint(f[12]);
  r.genotype = f[13];
  return r;
}

inline void write_robots_csv(std::ostream& os, const std::vector<RobotRow>& rows) {
  os << kRobotsHeader << '\n';
  for (const auto& r : rows) {
    write_robot_fields(os, r);
    os << '\n';
  }
}

inline std::vector<RobotRow> read_robots_csv(std::istream& in) {
  csv::expect_header(in, kRobotsHeader);
  std::vector<RobotRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto f = csv::split(line);
    if (f.size() != 14) throw CsvError("robots.csv row needs 14 fields");
    rows.push_back(parse_robot_fields(f));
  }
  return rows;
}

inline void write_pareto_csv(std::ostream& os, const std::vector<ParetoRow>& rows) {
  os << kRobotsHeader << ",nondominated\n";
  for (const auto& r : rows) {
    write_robot_fields(os, r.robot);
    os << ',' << (r.nondominated ? 1 : 0) << '\n';
  }
}

inline std::vector<ParetoRow> read_pareto_csv(std::istream& in) {
  csv::expect_header(in, std::string(kRobotsHeader) + ",nondominated");
  std::vector<ParetoRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto f = csv::split(line);
    if (f.size() != 15) throw CsvError("pareto.csv row needs 15 fields");
    rows.push_back({parse_robot_fields(f), csv::parse_uint(f[14]) != 0});
  }
  return rows;
}

inline void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows) {
  os << kSummaryHeader << '\n';
  for (const auto& r : rows)
    os << r.experiment << ',' << r.generation << ',' << r.metric << ',' << csv::format_real(r.median)
       << ',' << csv::format_real(r.q1) << ',' << csv::format_real(r.q3) << '\n';
}

inline std::vector<SummaryRow> read_summary_csv(std::istream& in) {
  csv::expect_header(in, kSummaryHeader);
  std::vector<SummaryRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto f = csv::split(line);
    if (f.size() != 6) throw CsvError("summary.csv row needs 6 fields");
    rows.push_back({f[0], csv::parse_uint(f[1]), f[2], csv::parse_real(f[3]), csv::parse_real(f[4]),
                    csv::parse_real(f[5])});
  }
  return rows;
}

template <class Writer, class Rows>
void write_file(const std::string& path, Writer&& writer, const Rows& rows) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw CsvError("cannot open " + path + " for writing");
  writer(os, rows);
  if (!os) throw CsvError("write failed: " + path);
}

template <class Reader>
auto read_file(const std::string& path, Reader&& reader) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CsvError("cannot open " + path);
  return reader(in);
}

}  // namespace evobot
