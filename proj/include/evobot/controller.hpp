#pragma once

#include <cmath>
#include <numbers>

namespace evobot {

/// Per-joint sinusoidal oscillator. Amplitude is a fraction of the servo's
/// quarter-turn travel, period is in seconds, phase is in turns.
struct OscillatorParams {
  double amplitude = 0.0;  // [0, 1]
  double period = 1.0;     // [1, 10] s
  double phase = 0.0;      // [0, 1)

  friend bool operator==(const OscillatorParams&, const OscillatorParams&) = default;
};

inline constexpr double kMaxJointAngle = std::numbers::pi / 2.0;

inline bool in_range(const OscillatorParams& p) noexcept {
  return p.amplitude >= 0.0 && p.amplitude <= 1.0 && p.period >= 1.0 && p.period <= 10.0 &&
         p.phase >= 0.0 && p.phase < 1.0;
}

/// Target hinge angle in radians at time t (seconds).
inline double target_angle(const OscillatorParams& p, double t) noexcept {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  return p.amplitude * kMaxJointAngle * std::sin(two_pi * t / p.period + two_pi * p.phase);
}

}  // namespace evobot
