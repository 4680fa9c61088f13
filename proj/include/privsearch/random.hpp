#pragma once

#include <cstdint>
#include <random>

#include "privsearch/bitvector.hpp"

namespace privsearch {

// All randomness comes from std::mt19937_64 (the 64-bit Mersenne Twister,
// fully specified by the C++ standard) seeded directly with a 64-bit value.
// Range reduction is done here rather than through std:: distributions,
// whose algorithms are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform on [0, bound) by rejection; bound > 0.
  std::uint64_t below(std::uint64_t bound);
  BitVector bits(std::size_t count);

 private:
  std::mt19937_64 engine_;
};

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

// Independent child seed for (stream, index) under a base seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index);

}  // namespace privsearch
