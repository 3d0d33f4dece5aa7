#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace banachlab {

using Engine = std::mt19937_64;

/// Independent stream keyed by (seed, tags...), e.g. (seed, restart_index).
inline Engine make_stream(std::uint64_t seed,
                          std::initializer_list<std::uint64_t> tags = {}) {
  std::vector<std::uint32_t> words;
  words.reserve(2 + 2 * tags.size());
  auto push = [&words](std::uint64_t v) {
    words.push_back(static_cast<std::uint32_t>(v));
    words.push_back(static_cast<std::uint32_t>(v >> 32));
  };
  push(seed);
  for (auto t : tags) push(t);
  std::seed_seq seq(words.begin(), words.end());
  return Engine(seq);
}

inline double gaussian(Engine& rng) {
  return std::normal_distribution<double>{0.0, 1.0}(rng);
}

inline double uniform(Engine& rng, double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>{lo, hi}(rng);
}

}  // namespace banachlab
