#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace commlab {

// Seeded random source. Wraps std::mt19937_64 (whose output sequence is
// fixed by the standard) with portable mappings to indices and reals, so
// a seed yields the same stream on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next() { return engine_(); }

  // Uniform on [0, 1) with 53 bits of resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform on [0, n); n must be positive.
  std::size_t index(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace commlab
