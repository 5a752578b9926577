#pragma once

// Deterministic planar surrogate for locomotion with a battery.
//
// Each joint follows its oscillator. Joint speed and acceleration come from
// finite differences of the target angle; torque is M = I*alpha + beta*Phi.
// Per-step energy is dt * sum_j max(0, M_j * Phi_j) and is drawn from the
// battery; the run stops once the battery is empty. Positive joint work
// produces thrust perpendicular to the driven segment, which moves and turns
// the whole body against linear drag.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <numbers>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "evobot/body.hpp"
#include "evobot/controller.hpp"
#include "evobot/lsystem.hpp"

namespace evobot {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) noexcept { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) noexcept { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 v) noexcept { return {s * v.x, s * v.y}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;

  double norm() const noexcept { return std::hypot(x, y); }
  double norm_sq() const noexcept { return x * x + y * y; }
  Vec2 rotated(double angle) const noexcept {
    const double c = std::cos(angle), s = std::sin(angle);
    return {c * x - s * y, s * x + c * y};
  }
};

inline constexpr double cross(Vec2 a, Vec2 b) noexcept { return a.x * b.y - a.y * b.x; }

struct SimConfig {
  double dt = 0.05;        // s
  double duration = 60.0;  // s
  double c_start = 10.0;   // energy units
  double module_length = 0.1;
  double module_mass = 1.0;
  double beta = 0.05;  // joint damping
  double kappa = 1.0;  // thrust per unit power
  double gamma_t = 1.0;
  double gamma_r = 1.0;
  double omega_ref = std::numbers::pi;

  /// Nominal number of steps, duration / dt.
  std::size_t steps() const { return static_cast<std::size_t>(std::llround(duration / dt)); }

  void validate() const {
    auto positive = [](double v, const char* name) {
      if (!(v > 0.0)) throw std::invalid_argument(std::string(name) + " must be positive");
    };
    positive(dt, "dt");
    positive(duration, "duration");
    positive(c_start, "c_start");
    positive(module_length, "module_length");
    positive(module_mass, "module_mass");
    positive(beta, "beta");
    positive(kappa, "kappa");
    positive(gamma_t, "gamma_t");
    positive(gamma_r, "gamma_r");
    positive(omega_ref, "omega_ref");
    const double n = duration / dt;
    if (!std::isfinite(duration) || std::llround(n) < 1 ||
        std::abs(n - static_cast<double>(std::llround(n))) > 1e-9 * std::max(1.0, n))
      throw std::invalid_argument("duration / dt must be a positive integer");
  }
};

struct JointLoad {
  double torque = 0.0;    // N*m, signed
  double velocity = 0.0;  // rad/s
};

/// Instantaneous power drawn by the servos: only positive mechanical work costs.
inline double compute_power(std::span<const JointLoad> joints) noexcept {
  double sum = 0.0;
  for (const auto& j : joints) sum += std::max(0.0, j.torque * j.velocity);
  return sum;
}

/// Remaining charge is kept as c_start minus the running sum of draws.
class BatteryState {
 public:
  explicit BatteryState(double c_start) : c_start_(c_start), remaining_(c_start) {}

  /// Returns false once the battery is empty.
  bool drain(double delta) {
    last_delta_ = delta;
    consumed_ += delta;
    remaining_ = std::max(0.0, c_start_ - consumed_);
    return remaining_ > 0.0;
  }

  double c_start() const noexcept { return c_start_; }
  double remaining() const noexcept { return remaining_; }
  double last_delta() const noexcept { return last_delta_; }
  double consumed() const noexcept { return consumed_; }
  bool depleted() const noexcept { return remaining_ <= 0.0; }

 private:
  double c_start_;
  double remaining_;
  double last_delta_ = 0.0;
  double consumed_ = 0.0;
};

struct JointState {
  double theta = 0.0;
  double phi = 0.0;
  double alpha = 0.0;
  double torque = 0.0;
};

struct PoseState {
  Vec2 position;
  double heading = 0.0;
  double last_omega = 0.0;
};

struct SimState {
  std::vector<JointState> joints;
  PoseState pose;
  std::size_t steps_done = 0;
};

struct EvalResult {
  double speed = 0.0;  // cm/s
  double battery_remaining = 0.0;
  double balance = 1.0;
  std::size_t alive_steps = 0;
  double displacement = 0.0;  // m
  double energy_used = 0.0;
};

class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Static per-joint quantities of a decoded body, in body coordinates.
struct JointGeometry {
  OscillatorParams oscillator;
  double inertia = 0.0;  // sum over the distal subtree of m * (d * L)^2
  std::size_t distal_count = 0;
  Vec2 drive_dir;  // segment direction the joint swings
  Vec2 offset;     // joint position relative to the core, m
};

struct RobotModel {
  std::vector<JointGeometry> joints;
  double total_mass = 0.0;
  double total_inertia = 0.0;  // about the core

  static RobotModel from(const BodyGraph& body, const SimConfig& cfg) {
    RobotModel model;
    const double m = cfg.module_mass;
    const double L = cfg.module_length;
    model.total_mass = m * static_cast<double>(body.size());
    const auto core_pos = body.core().grid_pos;
    for (const auto& mod : body.modules) {
      const Vec2 r{L * (mod.grid_pos.x - core_pos.x), L * (mod.grid_pos.y - core_pos.y)};
      model.total_inertia += m * r.norm_sq();
    }
    for (const auto& mod : body.modules) {
      if (mod.kind != ModuleKind::Joint) continue;
      JointGeometry j;
      j.oscillator = mod.joint.value_or(OscillatorParams{});
      // Breadth-first over the distal subtree; depth is the graph distance.
      std::vector<std::pair<std::size_t, std::size_t>> frontier{{mod.id, 0}};
      for (std::size_t i = 0; i < frontier.size(); ++i) {
        const auto [id, depth] = frontier[i];
        const double d = L * static_cast<double>(depth);
        j.inertia += m * d * d;
        for (auto c : body.modules[id].children) frontier.emplace_back(c, depth + 1);
      }
      j.distal_count = frontier.size();
      const GridVec dir = mod.children.empty() ? mod.attach_dir : body.modules[mod.children.front()].attach_dir;
      j.drive_dir = {static_cast<double>(dir.x), static_cast<double>(dir.y)};
      j.offset = {L * (mod.grid_pos.x - core_pos.x), L * (mod.grid_pos.y - core_pos.y)};
      model.joints.push_back(j);
    }
    return model;
  }
};

struct StepResult {
  SimState state;
  double delta = 0.0;  // energy drawn during this step
};

/// Advances one step at time t. The first step has zero joint speed, and
/// joint acceleration is zero until two speed samples exist.
inline StepResult step(const RobotModel& model, const SimState& prev, double t, const SimConfig& cfg) {
  StepResult out;
  out.state.steps_done = prev.steps_done + 1;
  out.state.joints.resize(model.joints.size());
  const double psi = prev.pose.heading;

  Vec2 force;
  double torque_z = 0.0;
  double power = 0.0;
  for (std::size_t i = 0; i < model.joints.size(); ++i) {
    const auto& geo = model.joints[i];
    auto& js = out.state.joints[i];
    js.theta = target_angle(geo.oscillator, t);
    if (prev.steps_done >= 1) js.phi = (js.theta - prev.joints[i].theta) / cfg.dt;
    if (prev.steps_done >= 2) js.alpha = (js.phi - prev.joints[i].phi) / cfg.dt;
    js.torque = geo.inertia * js.alpha + cfg.beta * js.phi;

    const double p = std::max(0.0, js.torque * js.phi);
    power += p;
    if (p > 0.0) {
      Vec2 thrust = (cfg.kappa * p) * geo.drive_dir.rotated(js.theta + psi + std::numbers::pi / 2.0);
      if (js.phi < 0.0) thrust = -1.0 * thrust;
      force = force + thrust;
      torque_z += cross(geo.offset.rotated(psi), thrust);
    }
  }

  const Vec2 velocity = (1.0 / (cfg.gamma_t * model.total_mass)) * force;
  const double omega = model.total_inertia > 0.0 ? torque_z / (cfg.gamma_r * model.total_inertia) : 0.0;
  out.state.pose.position = prev.pose.position + cfg.dt * velocity;
  out.state.pose.heading = psi + omega * cfg.dt;
  out.state.pose.last_omega = omega;
  out.delta = power * cfg.dt;

  if (!std::isfinite(out.delta) || !std::isfinite(omega) || !std::isfinite(velocity.x) ||
      !std::isfinite(velocity.y))
    throw SimulationError("non-finite value in simulation step " + std::to_string(prev.steps_done));
  return out;
}

inline double speed_of(Vec2 start, Vec2 end, double duration) {
  if (!(duration > 0.0)) throw std::invalid_argument("duration must be positive");
  return (end - start).norm() / duration * 100.0;
}

inline double balance_from_mean_rate(double mean_abs_omega, double omega_ref) {
  return 1.0 - std::min(1.0, mean_abs_omega / omega_ref);
}

/// 1 minus the mean absolute yaw rate relative to omega_ref, floored at 0.
inline double balance_of(std::span<const double> omegas, double omega_ref) {
  if (omegas.empty()) throw std::invalid_argument("balance needs at least one sample");
  if (!(omega_ref > 0.0)) throw std::invalid_argument("omega_ref must be positive");
  double sum = 0.0;
  for (double w : omegas) sum += std::abs(w);
  return balance_from_mean_rate(sum / static_cast<double>(omegas.size()), omega_ref);
}

/// Anything that can be stepped in time and report its draw, yaw rate and
/// position can run through the battery-limited episode loop.
template <class P>
concept Plant = requires(P& p, double t) {
  { p.advance(t) } -> std::convertible_to<double>;
  { p.yaw_rate() } -> std::convertible_to<double>;
  { p.position() } -> std::convertible_to<Vec2>;
  { p.heading() } -> std::convertible_to<double>;
};

class RobotPlant {
 public:
  RobotPlant(RobotModel model, const SimConfig& cfg) : model_(std::move(model)), cfg_(cfg) {
    state_.joints.resize(model_.joints.size());
  }

  double advance(double t) {
    auto r = step(model_, state_, t, cfg_);
    state_ = std::move(r.state);
    return r.delta;
  }
  double yaw_rate() const noexcept { return state_.pose.last_omega; }
  Vec2 position() const noexcept { return state_.pose.position; }
  double heading() const noexcept { return state_.pose.heading; }
  const SimState& state() const noexcept { return state_; }

 private:
  RobotModel model_;
  SimConfig cfg_;
  SimState state_;
};

/// Runs up to cfg.steps() steps, stopping as soon as the battery is empty.
/// Speed divides by the nominal duration, so an early stop costs speed. When
/// `trace` is set, writes CSV rows `step,t,E,x,y,psi,dC`.
template <Plant P>
EvalResult run_episode(P& plant, const SimConfig& cfg, std::ostream* trace = nullptr) {
  const std::size_t n = cfg.steps();
  BatteryState battery(cfg.c_start);
  const Vec2 start = plant.position();
  double abs_omega_sum = 0.0;
  std::size_t executed = 0;
  if (trace) *trace << "step,t,E,x,y,psi,dC\n";
  while (executed < n) {
    const double t = static_cast<double>(executed) * cfg.dt;
    const double delta = plant.advance(t);
    ++executed;
    abs_omega_sum += std::abs(plant.yaw_rate());
    const bool alive = battery.drain(delta);
    if (trace) {
      const auto p = plant.position();
      *trace << executed << ',' << t << ',' << battery.remaining() << ',' << p.x << ',' << p.y << ','
             << plant.heading() << ',' << delta << '\n';
    }
    if (!alive) break;
  }
  EvalResult r;
  r.alive_steps = executed;
  r.battery_remaining = battery.remaining();
  r.energy_used = battery.consumed();
  r.displacement = (plant.position() - start).norm();
  r.speed = speed_of(start, plant.position(), cfg.duration);
  r.balance = executed == 0 ? 1.0
                            : balance_from_mean_rate(abs_omega_sum / static_cast<double>(executed),
                                                     cfg.omega_ref);
  return r;
}

inline EvalResult simulate(const BodyGraph& body, const SimConfig& cfg, std::ostream* trace = nullptr) {
  RobotPlant plant(RobotModel::from(body, cfg), cfg);
  return run_episode(plant, cfg, trace);
}

inline EvalResult simulate(const Genotype& g, const SimConfig& cfg, const RewriteConfig& rw,
                           const BodyLimits& limits, std::ostream* trace = nullptr) {
  return simulate(decode(g, rw, limits), cfg, trace);
}

}  // namespace evobot
