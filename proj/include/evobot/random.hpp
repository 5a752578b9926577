#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace evobot {

using Rng = std::mt19937_64;

namespace detail {
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
}  // namespace detail

/// Mixes a path of integers (master seed, repetition, generation, index, ...)
/// into one 64-bit seed. Distinct paths give statistically independent streams.
constexpr std::uint64_t derive_seed(std::initializer_list<std::uint64_t> path) noexcept {
  std::uint64_t h = 0x6a09e667f3bcc908ULL;
  for (auto v : path) h = detail::splitmix64(h ^ detail::splitmix64(v));
  return h;
}

inline Rng make_rng(std::uint64_t seed) { return Rng{seed}; }

inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>{0, n - 1}(rng);
}

inline bool bernoulli(Rng& rng, double p) {
  return std::bernoulli_distribution{p}(rng);
}

}  // namespace evobot
