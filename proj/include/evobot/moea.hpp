#pragma once

// NSGA-II machinery (all objectives maximized) and a (mu + lambda) evolution
// loop that is generic over the problem being evolved.

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <exception>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "evobot/random.hpp"

namespace evobot {

using ObjectiveVector = std::vector<double>;
using Front = std::vector<std::size_t>;

/// True iff a is no worse than b everywhere and strictly better somewhere.
inline bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("objective vectors differ in length");
  bool strictly = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return false;
    if (a[i] > b[i]) strictly = true;
  }
  return strictly;
}

/// Deb's fast non-dominated sort. Indices inside each front are ascending.
inline std::vector<Front> fast_nondominated_sort(std::span<const ObjectiveVector> points) {
  const std::size_t n = points.size();
  std::vector<std::vector<std::size_t>> dominated_by_me(n);
  std::vector<std::size_t> domination_count(n, 0);
  std::vector<Front> fronts(1);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) {
      if (dominates(points[p], points[q])) {
        dominated_by_me[p].push_back(q);
        ++domination_count[q];
      } else if (dominates(points[q], points[p])) {
        dominated_by_me[q].push_back(p);
        ++domination_count[p];
      }
    }
    // Every pair involving p has been compared by now.
    if (domination_count[p] == 0) fronts[0].push_back(p);
  }
  if (fronts[0].empty()) fronts.clear();

  for (std::size_t i = 0; i < fronts.size(); ++i) {
    Front next;
    for (auto p : fronts[i])
      for (auto q : dominated_by_me[p])
        if (--domination_count[q] == 0) next.push_back(q);
    if (!next.empty()) {
      std::sort(next.begin(), next.end());
      fronts.push_back(std::move(next));
    }
  }
  return fronts;
}

/// Crowding distance within one front. Per objective, the first and last
/// members in sorted order (ties by position) get +inf; interior members add
/// the normalized gap between their neighbours. A flat objective adds 0.
inline std::vector<double> crowding_distance(std::span<const ObjectiveVector> front) {
  const std::size_t n = front.size();
  std::vector<double> dist(n, 0.0);
  if (n == 0) return dist;
  constexpr double inf = std::numeric_limits<double>::infinity();
  const std::size_t m = front.front().size();
  std::vector<std::size_t> order(n);
  for (std::size_t obj = 0; obj < m; ++obj) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return front[a][obj] < front[b][obj]; });
    dist[order.front()] = inf;
    dist[order.back()] = inf;
    const double range = front[order.back()][obj] - front[order.front()][obj];
    if (!(range > 0.0)) continue;
    for (std::size_t i = 1; i + 1 < n; ++i)
      dist[order[i]] += (front[order[i + 1]][obj] - front[order[i - 1]][obj]) / range;
  }
  return dist;
}

/// k draws with replacement; returns the index that `better` prefers.
/// `better(a, b)` must be a strict ordering so the winner is unique.
template <class Better>
  requires std::predicate<Better&, std::size_t, std::size_t>
std::size_t tournament_select(std::size_t pop_size, std::size_t k, Better&& better, Rng& rng) {
  if (pop_size == 0) throw std::invalid_argument("tournament over an empty population");
  std::size_t best = uniform_index(rng, pop_size);
  for (std::size_t i = 1; i < k; ++i) {
    const std::size_t c = uniform_index(rng, pop_size);
    if (better(c, best)) best = c;
  }
  return best;
}

/// 2D hypervolume (maximization) dominated by `points` and bounded below by `ref`.
inline double hypervolume_2d(std::vector<std::pair<double, double>> points,
                             std::pair<double, double> ref) {
  std::erase_if(points, [&](const auto& p) { return !(p.first > ref.first && p.second > ref.second); });
  std::sort(points.begin(), points.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second > b.second;
  });
  double area = 0.0;
  double y_top = ref.second;
  for (const auto& [x, y] : points) {
    if (y > y_top) {
      area += (x - ref.first) * (y - y_top);
      y_top = y;
    }
  }
  return area;
}

// ---------------------------------------------------------------------------
// Evolution loop

enum class SurvivorSelection { Nsga2Truncation, Tournament };

struct EvolutionConfig {
  std::size_t mu = 100;
  std::size_t lambda = 100;
  std::size_t generations = 100;
  std::size_t tournament_k = 4;
  double p_crossover = 0.8;
  double p_mutation = 0.8;
  SurvivorSelection survivor_selection = SurvivorSelection::Nsga2Truncation;
  std::uint64_t master_seed = 1;
  std::size_t threads = 1;  // offspring evaluation workers; results do not depend on it

  void validate() const {
    if (mu < 1) throw std::invalid_argument("mu must be >= 1");
    if (lambda < 1) throw std::invalid_argument("lambda must be >= 1");
    if (tournament_k < 1) throw std::invalid_argument("tournament_k must be >= 1");
    if (!(p_crossover >= 0.0 && p_crossover <= 1.0))
      throw std::invalid_argument("p_crossover must be in [0,1]");
    if (!(p_mutation >= 0.0 && p_mutation <= 1.0))
      throw std::invalid_argument("p_mutation must be in [0,1]");
  }
};

template <class Payload>
struct Evaluation {
  ObjectiveVector objectives;
  Payload payload;
};

template <class P>
concept EvolutionProblem = requires(const P& p, const typename P::genotype_type& g, Rng& rng) {
  typename P::payload_type;
  { p.random_genotype(rng) } -> std::same_as<typename P::genotype_type>;
  { p.crossover(g, g, rng) } -> std::same_as<typename P::genotype_type>;
  { p.mutate(g, rng) } -> std::same_as<typename P::genotype_type>;
  { p.evaluate(g) } -> std::same_as<Evaluation<typename P::payload_type>>;
};

template <class G, class Payload>
struct Individual {
  G genotype;
  Payload payload;
  ObjectiveVector objectives;
  std::size_t rank = 0;
  double crowding = 0.0;
  std::uint64_t id = 0;  // birth order within a run
};

/// Sets rank and crowding of every member; returns the fronts.
template <class G, class Payload>
std::vector<Front> assign_ranking(std::vector<Individual<G, Payload>>& pop) {
  std::vector<ObjectiveVector> objs;
  objs.reserve(pop.size());
  for (const auto& ind : pop) objs.push_back(ind.objectives);
  auto fronts = fast_nondominated_sort(objs);
  for (std::size_t f = 0; f < fronts.size(); ++f) {
    std::vector<ObjectiveVector> members;
    for (auto i : fronts[f]) members.push_back(objs[i]);
    const auto dist = crowding_distance(members);
    for (std::size_t j = 0; j < fronts[f].size(); ++j) {
      pop[fronts[f][j]].rank = f;
      pop[fronts[f][j]].crowding = dist[j];
    }
  }
  return fronts;
}

/// Lower rank wins, then larger crowding distance, then lower index.
template <class G, class Payload>
bool crowded_better(const std::vector<Individual<G, Payload>>& pop, std::size_t a, std::size_t b) {
  if (pop[a].rank != pop[b].rank) return pop[a].rank < pop[b].rank;
  if (pop[a].crowding != pop[b].crowding) return pop[a].crowding > pop[b].crowding;
  return a < b;
}

/// Single-objective comparison: higher first objective wins, then lower index.
template <class G, class Payload>
bool scalar_better(const std::vector<Individual<G, Payload>>& pop, std::size_t a, std::size_t b) {
  if (pop[a].objectives[0] != pop[b].objectives[0]) return pop[a].objectives[0] > pop[b].objectives[0];
  return a < b;
}

namespace detail {
/// Runs fn(i) for i in [0, n) on up to `threads` workers. Rethrows the first failure.
template <class Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn&& fn) {
  threads = std::max<std::size_t>(1, std::min(threads, n));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> workers;
  for (std::size_t w = 0; w < threads; ++w) {
    workers.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += threads) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : workers) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

enum : std::uint64_t { kSurvivorStream = ~std::uint64_t{0} };
}  // namespace detail

/// (mu + lambda) evolution with per-offspring seed streams derived from
/// (run seed, generation, offspring index), so results do not depend on how
/// evaluation is scheduled.
template <EvolutionProblem Problem>
class Evolution {
 public:
  using genotype_type = typename Problem::genotype_type;
  using payload_type = typename Problem::payload_type;
  using individual_type = Individual<genotype_type, payload_type>;
  using population_type = std::vector<individual_type>;

  Evolution(Problem problem, EvolutionConfig cfg) : problem_(std::move(problem)), cfg_(cfg) {
    cfg_.validate();
  }

  const EvolutionConfig& config() const noexcept { return cfg_; }
  const Problem& problem() const noexcept { return problem_; }

  population_type initialize(std::uint64_t run_seed) const {
    population_type pop(cfg_.mu);
    detail::parallel_for(cfg_.mu, cfg_.threads, [&](std::size_t i) {
      auto rng = make_rng(derive_seed({run_seed, 0, i}));
      auto g = problem_.random_genotype(rng);
      pop[i] = make_individual(std::move(g), i);
    });
    assign_ranking(pop);
    return pop;
  }

  /// Produces generation `generation` (>= 1) from `parents`.
  population_type next_generation(const population_type& parents, std::uint64_t run_seed,
                                  std::size_t generation) const {
    if (parents.empty()) throw std::invalid_argument("empty parent population");
    population_type offspring(cfg_.lambda);
    const std::uint64_t first_id = cfg_.mu + (generation - 1) * cfg_.lambda;
    detail::parallel_for(cfg_.lambda, cfg_.threads, [&](std::size_t i) {
      auto rng = make_rng(derive_seed({run_seed, generation, i}));
      const auto a = select_parent(parents, rng);
      const auto b = select_parent(parents, rng);
      genotype_type child = bernoulli(rng, cfg_.p_crossover)
                                ? problem_.crossover(parents[a].genotype, parents[b].genotype, rng)
                                : parents[a].genotype;
      if (bernoulli(rng, cfg_.p_mutation)) child = problem_.mutate(child, rng);
      offspring[i] = make_individual(std::move(child), first_id + i);
    });

    population_type pool = parents;
    pool.insert(pool.end(), std::make_move_iterator(offspring.begin()),
                std::make_move_iterator(offspring.end()));
    auto survivors = cfg_.survivor_selection == SurvivorSelection::Nsga2Truncation
                         ? truncate(std::move(pool))
                         : survivor_tournament(std::move(pool), run_seed, generation);
    assign_ranking(survivors);
    return survivors;
  }

  /// Fills `mu` slots from the combined pool by whole fronts, splitting the
  /// last front by descending crowding distance.
  population_type truncate(population_type pool) const {
    const auto fronts = assign_ranking(pool);
    population_type out;
    out.reserve(cfg_.mu);
    for (const auto& front : fronts) {
      if (out.size() + front.size() <= cfg_.mu) {
        for (auto i : front) out.push_back(pool[i]);
        continue;
      }
      Front last = front;
      std::stable_sort(last.begin(), last.end(),
                       [&](std::size_t a, std::size_t b) { return pool[a].crowding > pool[b].crowding; });
      for (std::size_t j = 0; out.size() < cfg_.mu; ++j) out.push_back(pool[last[j]]);
      break;
    }
    return out;
  }

 private:
  individual_type make_individual(genotype_type g, std::uint64_t id) const {
    auto ev = problem_.evaluate(g);
    individual_type ind;
    ind.genotype = std::move(g);
    ind.payload = std::move(ev.payload);
    ind.objectives = std::move(ev.objectives);
    ind.id = id;
    return ind;
  }

  bool better(const population_type& pop, std::size_t a, std::size_t b) const {
    return pop[a].objectives.size() == 1 ? scalar_better(pop, a, b) : crowded_better(pop, a, b);
  }

  std::size_t select_parent(const population_type& pop, Rng& rng) const {
    return tournament_select(
        pop.size(), cfg_.tournament_k, [&](std::size_t a, std::size_t b) { return better(pop, a, b); },
        rng);
  }

  /// Repeated tournaments over the pool; each winner leaves the pool.
  population_type survivor_tournament(population_type pool, std::uint64_t run_seed,
                                      std::size_t generation) const {
    assign_ranking(pool);
    auto rng = make_rng(derive_seed({run_seed, generation, detail::kSurvivorStream}));
    std::vector<std::size_t> remaining(pool.size());
    std::iota(remaining.begin(), remaining.end(), 0);
    population_type out;
    out.reserve(cfg_.mu);
    while (out.size() < cfg_.mu && !remaining.empty()) {
      const auto slot = tournament_select(
          remaining.size(), cfg_.tournament_k,
          [&](std::size_t a, std::size_t b) { return better(pool, remaining[a], remaining[b]); }, rng);
      out.push_back(pool[remaining[slot]]);
      remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(slot));
    }
    return out;
  }

  Problem problem_;
  EvolutionConfig cfg_;
};

}  // namespace evobot
