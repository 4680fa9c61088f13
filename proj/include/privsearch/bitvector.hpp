#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace privsearch {

// Fixed-length bit string packed into 64-bit words. Bit i lives in word i/64
// at position i%64; bits past size() are kept zero.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }

  bool get(std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1U; }
  void set(std::size_t i, bool value) noexcept {
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (value) {
      words_[i >> 6] |= mask;
    } else {
      words_[i >> 6] &= ~mask;
    }
  }
  void flip(std::size_t i) noexcept { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  std::size_t popcount() const noexcept;
  std::size_t popcount(std::size_t begin, std::size_t end) const noexcept;

  // Throws LengthMismatch when sizes differ.
  BitVector& operator^=(const BitVector& other);

  // Copy of bits [begin, begin+count); positions past size() read as zero.
  BitVector slice(std::size_t begin, std::size_t count) const;
  // Overwrites bits [offset, offset+src.size()) with src; grows nothing.
  void assign(std::size_t offset, const BitVector& src);

  std::span<const std::uint64_t> words() const noexcept { return words_; }

  // Little-endian bit order within each byte: bit i goes to byte i/8, bit i%8.
  std::vector<std::uint8_t> to_bytes() const;
  static BitVector from_bytes(std::span<const std::uint8_t> bytes, std::size_t size);

  friend bool operator==(const BitVector& a, const BitVector& b) {
    return a.size_ == b.size_ && a.words_ == b.words_;
  }

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

inline BitVector operator^(BitVector a, const BitVector& b) {
  a ^= b;
  return a;
}

}  // namespace privsearch
