#pragma once

#include <cstdint>
#include <random>

namespace dqclab {

// Mixes a tuple of integers into a single 64-bit seed (splitmix64 finalizer
// chained over the inputs). Used to key independent random streams.
std::uint64_t derive_seed(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0);

// A reproducible random stream keyed by (seed, stream index).
//
// Distribution code is written here rather than taken from <random> because the
// standard distributions are implementation-defined; only the engine is pinned.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64() { return engine_(); }
  // Uniform in [0, 1) with 53 random bits.
  double uniform();
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);
  // Standard normal via Box-Muller.
  double normal();
  // +1 or -1 with equal probability.
  int rademacher() { return (engine_() >> 63) ? 1 : -1; }

 private:
  std::mt19937_64 engine_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace dqclab
