#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace rnlu {

// std::mt19937_64 output is fully specified by the standard, but std::shuffle
// and the distribution classes are not. These helpers keep every seeded
// choice identical across standard libraries so model files, reports and
// transcripts compare byte-for-byte between machines.

inline uint64_t pick_index(std::mt19937_64& rng, uint64_t n) {
  return n <= 1 ? 0 : rng() % n;
}

template <typename T>
void deterministic_shuffle(std::vector<T>& items, std::mt19937_64& rng) {
  for (size_t i = items.size(); i > 1; --i) {
    size_t j = static_cast<size_t>(pick_index(rng, i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace rnlu
