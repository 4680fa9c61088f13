#include "privsearch/random.hpp"

#include <limits>

namespace privsearch {

std::uint64_t Rng::below(std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return x % bound;
}

BitVector Rng::bits(std::size_t count) {
  BitVector out(count);
  std::size_t i = 0;
  while (i < count) {
    std::uint64_t word = engine_();
    for (int b = 0; b < 64 && i < count; ++b, ++i) {
      if ((word >> b) & 1U) out.set(i, true);
    }
  }
  return out;
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index) {
  return mix64(mix64(mix64(base) ^ stream) ^ index);
}

}  // namespace privsearch
