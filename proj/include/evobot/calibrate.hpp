#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>

#include "evobot/body.hpp"
#include "evobot/lsystem.hpp"
#include "evobot/random.hpp"
#include "evobot/sim.hpp"

namespace evobot {

/// Initial charge as a fraction of a maximum-size robot's full-run consumption.
inline constexpr double kBatteryPressure = 10.0 / 12.0;

inline double cstart_from_consumption(double mean_consumption) {
  if (!(mean_consumption > 0.0) || !std::isfinite(mean_consumption))
    throw std::invalid_argument("calibration needs a positive finite mean consumption");
  return kBatteryPressure * mean_consumption;
}

struct CalibrationResult {
  double c_start = 0.0;
  double mean_consumption = 0.0;
  std::size_t samples = 0;
};

/// Samples random genotypes until `samples` bodies with exactly max_joints
/// joints are found, runs each through `consumption(body)` (total energy over
/// a full run with an unlimited battery), and scales the mean.
template <class Consumption>
CalibrationResult calibrate_cstart(std::size_t samples, std::uint64_t seed, const RewriteConfig& rw,
                                   const BodyLimits& limits, Consumption&& consumption,
                                   std::size_t attempts_per_sample = 20000) {
  if (samples < 1) throw std::invalid_argument("calibration needs at least one sample");
  double total = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    auto rng = make_rng(derive_seed({seed, s}));
    bool found = false;
    for (std::size_t attempt = 0; attempt < attempts_per_sample && !found; ++attempt) {
      const auto body = decode(random_genotype(rng), rw, limits);
      if (body.n_joints != limits.max_joints) continue;
      total += static_cast<double>(consumption(body));
      found = true;
    }
    if (!found) throw std::runtime_error("no maximum-size robot found within the retry budget");
  }
  CalibrationResult r;
  r.samples = samples;
  r.mean_consumption = total / static_cast<double>(samples);
  r.c_start = cstart_from_consumption(r.mean_consumption);
  return r;
}

inline CalibrationResult calibrate_cstart(const SimConfig& sim, std::size_t samples, std::uint64_t seed,
                                          const RewriteConfig& rw, const BodyLimits& limits) {
  SimConfig unlimited = sim;
  unlimited.c_start = std::numeric_limits<double>::infinity();
  return calibrate_cstart(samples, seed, rw, limits,
                          [&](const BodyGraph& b) { return simulate(b, unlimited).energy_used; });
}

}  // namespace evobot
