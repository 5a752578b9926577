#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

namespace evobot {

struct Quartiles {
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
};

/// Order statistic at fractional position p * (n - 1), linearly interpolated.
inline double quantile_sorted(std::span<const double> sorted, double p) {
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

inline Quartiles aggregate_generation(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("cannot aggregate an empty sample");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  return {quantile_sorted(v, 0.5), quantile_sorted(v, 0.25), quantile_sorted(v, 0.75)};
}

inline double median(std::span<const double> values) { return aggregate_generation(values).median; }

struct SummaryStats {
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation (n - 1); 0 for n = 1
};

inline std::optional<SummaryStats> summarize(std::span<const double> values) {
  if (values.empty()) return std::nullopt;
  SummaryStats s;
  s.n = values.size();
  double sum = 0.0;
  for (double x : values) sum += x;
  s.mean = sum / static_cast<double>(s.n);
  if (s.n > 1) {
    double ss = 0.0;
    for (double x : values) ss += (x - s.mean) * (x - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(s.n - 1));
  }
  return s;
}

struct WelchResult {
  double t = 0.0;
  double df = 0.0;
  double p_two_sided = 1.0;
};

/// Welch's unequal-variance t-test from summary statistics. The two-sided
/// p-value comes from the Student-t survival function.
inline WelchResult welch_t(const SummaryStats& a, const SummaryStats& b) {
  if (a.n < 2 || b.n < 2) throw std::invalid_argument("welch_t needs at least two samples per group");
  if (a.sd < 0.0 || b.sd < 0.0) throw std::invalid_argument("standard deviation must be non-negative");
  if (a.sd == 0.0 && b.sd == 0.0) throw std::invalid_argument("both standard deviations are zero");
  const double va = a.sd * a.sd / static_cast<double>(a.n);
  const double vb = b.sd * b.sd / static_cast<double>(b.n);
  WelchResult r;
  r.t = (a.mean - b.mean) / std::sqrt(va + vb);
  r.df = (va + vb) * (va + vb) /
         (va * va / static_cast<double>(a.n - 1) + vb * vb / static_cast<double>(b.n - 1));
  const boost::math::students_t dist(r.df);
  r.p_two_sided = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(r.t))));
  return r;
}

}  // namespace evobot
