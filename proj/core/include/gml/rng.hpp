#pragma once

#include <cstdint>
#include <random>

namespace gml {

// Deterministic source for sampling; all randomized code paths derive from
// an explicit seed so runs are reproducible.
struct Rng {
  std::mt19937_64 eng;

  explicit Rng(std::uint64_t seed) : eng(seed) {}

  int below(int n) { // uniform in [0, n)
    return std::uniform_int_distribution<int>(0, n - 1)(eng);
  }
  bool flip() { return below(2) == 0; }
  std::uint64_t u64() { return eng(); }
};

} // namespace gml
