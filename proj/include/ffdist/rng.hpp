#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace ffdist {

// All randomness flows through std::mt19937_64, whose output sequence is fixed
// by the C++ standard. The standard distributions are not portable, so bounded
// draws use plain rejection sampling below.
using Engine = std::mt19937_64;

/// Uniform integer in [0, bound). bound must be nonzero.
inline std::uint64_t uniform_below(Engine& eng, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t r;
  do {
    r = eng();
  } while (r >= limit);
  return r % bound;
}

/// SplitMix64 finalizer. Used to derive stable child seeds.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30U)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27U)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31U);
}

constexpr std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x6A09E667F3BCC909ULL;
  for (std::uint64_t v : parts) h = mix64(h ^ mix64(v));
  return h;
}

}  // namespace ffdist
