#pragma once

// Robot evolution experiments: the robot problem plugged into the generic
// evolution loop, repeated over seeded runs and logged as robots.csv rows.

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "evobot/body.hpp"
#include "evobot/lsystem.hpp"
#include "evobot/moea.hpp"
#include "evobot/records.hpp"
#include "evobot/sim.hpp"

namespace evobot {

/// Baseline optimizes speed alone; battery adds remaining charge as a second objective.
enum class ExperimentMode { Baseline, Battery };

inline std::string_view to_string(ExperimentMode m) {
  return m == ExperimentMode::Baseline ? "baseline" : "battery";
}

struct RobotPhenotype {
  MorphDescriptors morphology;
  EvalResult eval;
};

class RobotProblem {
 public:
  using genotype_type = Genotype;
  using payload_type = RobotPhenotype;

  RobotProblem(ExperimentMode mode, SimConfig sim, RewriteConfig rewrite, BodyLimits limits)
      : mode_(mode), sim_(sim), rewrite_(rewrite), limits_(limits) {}

  Genotype random_genotype(Rng& rng) const { return evobot::random_genotype(rng); }
  Genotype crossover(const Genotype& a, const Genotype& b, Rng& rng) const {
    return evobot::crossover(a, b, rng);
  }
  Genotype mutate(const Genotype& g, Rng& rng) const { return evobot::mutate(g, rng); }

  Evaluation<RobotPhenotype> evaluate(const Genotype& g) const {
    const auto body = decode(g, rewrite_, limits_);
    Evaluation<RobotPhenotype> ev;
    ev.payload.morphology = descriptors(body);
    ev.payload.eval = simulate(body, sim_);
    ev.objectives = objectives(ev.payload.eval);
    return ev;
  }

  ObjectiveVector objectives(const EvalResult& r) const {
    if (mode_ == ExperimentMode::Baseline) return {r.speed};
    return {r.speed, r.battery_remaining};
  }

  ExperimentMode mode() const noexcept { return mode_; }

 private:
  ExperimentMode mode_;
  SimConfig sim_;
  RewriteConfig rewrite_;
  BodyLimits limits_;
};

struct ExperimentSetup {
  EvolutionConfig evolution;
  SimConfig sim;
  RewriteConfig rewrite;
  BodyLimits limits;
  std::size_t repetitions = 10;
};

using RobotIndividual = Individual<Genotype, RobotPhenotype>;

inline RobotRow to_row(ExperimentMode mode, std::size_t run, std::size_t generation,
                       const RobotIndividual& ind) {
  RobotRow r;
  r.experiment = std::string(to_string(mode));
  r.run = run;
  r.generation = generation;
  r.robot_id = ind.id;
  const auto& m = ind.payload.morphology;
  r.n_modules = m.size;
  r.n_bricks = m.n_bricks;
  r.n_joints = m.n_joints;
  r.branching = m.branching;
  r.proportion = m.proportion;
  const auto& e = ind.payload.eval;
  r.speed_cms = e.speed;
  r.battery_remaining = e.battery_remaining;
  r.balance = e.balance;
  r.alive_steps = e.alive_steps;
  r.genotype = to_text(ind.genotype, "; ");
  return r;
}

/// Seed of repetition `run`; the same across modes so both experiments start
/// from identical initial populations.
inline std::uint64_t run_seed(std::uint64_t master_seed, std::size_t run) {
  return derive_seed({master_seed, run});
}

using GenerationObserver =
    std::function<void(ExperimentMode, std::size_t run, std::size_t generation,
                       const std::vector<RobotIndividual>&)>;

/// Runs every repetition and logs the surviving population after each of
/// generations 1..G, so the log has mu * G * repetitions rows.
inline std::vector<RobotRow> run_experiment(const ExperimentSetup& setup, ExperimentMode mode,
                                            const GenerationObserver& observer = {}) {
  setup.sim.validate();
  Evolution<RobotProblem> evo(RobotProblem(mode, setup.sim, setup.rewrite, setup.limits),
                              setup.evolution);
  std::vector<RobotRow> rows;
  rows.reserve(setup.evolution.mu * setup.evolution.generations * setup.repetitions);
  for (std::size_t run = 0; run < setup.repetitions; ++run) {
    const auto seed = run_seed(setup.evolution.master_seed, run);
    auto pop = evo.initialize(seed);
    for (std::size_t gen = 1; gen <= setup.evolution.generations; ++gen) {
      pop = evo.next_generation(pop, seed, gen);
      for (const auto& ind : pop) rows.push_back(to_row(mode, run, gen, ind));
      if (observer) observer(mode, run, gen, pop);
    }
  }
  return rows;
}

}  // namespace evobot
