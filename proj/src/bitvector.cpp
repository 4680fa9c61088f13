#include "privsearch/bitvector.hpp"

#include <algorithm>
#include <bit>

#include "privsearch/error.hpp"

namespace privsearch {

std::size_t BitVector::popcount() const noexcept {
  std::size_t total = 0;
  for (auto w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

std::size_t BitVector::popcount(std::size_t begin, std::size_t end) const noexcept {
  std::size_t total = 0;
  while (begin < end && (begin & 63) != 0) total += get(begin++);
  while (begin + 64 <= end) {
    total += static_cast<std::size_t>(std::popcount(words_[begin >> 6]));
    begin += 64;
  }
  while (begin < end) total += get(begin++);
  return total;
}

BitVector& BitVector::operator^=(const BitVector& other) {
  if (other.size_ != size_) {
    fail(ErrorCode::kLengthMismatch, "bit vector xor of unequal lengths");
  }
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
  return *this;
}

namespace {

// 64 bits starting at bit pos; words past the end read as zero.
std::uint64_t word_at(std::span<const std::uint64_t> words, std::size_t pos) {
  const std::size_t index = pos >> 6;
  const std::size_t shift = pos & 63;
  if (index >= words.size()) return 0;
  std::uint64_t word = words[index] >> shift;
  if (shift != 0 && index + 1 < words.size()) word |= words[index + 1] << (64 - shift);
  return word;
}

std::uint64_t low_mask(std::size_t bits) {
  return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
}

}  // namespace

BitVector BitVector::slice(std::size_t begin, std::size_t count) const {
  BitVector out(count);
  const std::size_t valid = begin < size_ ? std::min(count, size_ - begin) : 0;
  for (std::size_t w = 0; w * 64 < valid; ++w) {
    out.words_[w] = word_at(words_, begin + w * 64) & low_mask(valid - w * 64);
  }
  return out;
}

void BitVector::assign(std::size_t offset, const BitVector& src) {
  if (offset + src.size() > size_) {
    fail(ErrorCode::kLengthMismatch, "bit vector assign past end");
  }
  for (std::size_t i = 0; i < src.size(); i += 64) {
    const std::size_t n = std::min<std::size_t>(64, src.size() - i);
    const std::uint64_t bits = word_at(src.words_, i) & low_mask(n);
    const std::size_t pos = offset + i;
    const std::size_t index = pos >> 6;
    const std::size_t shift = pos & 63;
    const std::uint64_t mask = low_mask(n);
    words_[index] = (words_[index] & ~(mask << shift)) | (bits << shift);
    if (shift != 0 && shift + n > 64) {
      const std::size_t spill = shift + n - 64;
      words_[index + 1] = (words_[index + 1] & ~low_mask(spill)) | (bits >> (64 - shift));
    }
  }
}

std::vector<std::uint8_t> BitVector::to_bytes() const {
  std::vector<std::uint8_t> bytes((size_ + 7) / 8, 0);
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    bytes[i] = static_cast<std::uint8_t>(words_[i / 8] >> (8 * (i % 8)));
  }
  return bytes;
}

BitVector BitVector::from_bytes(std::span<const std::uint8_t> bytes, std::size_t size) {
  if (bytes.size() != (size + 7) / 8) {
    fail(ErrorCode::kLengthMismatch, "byte count does not match bit length");
  }
  BitVector out(size);
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    out.words_[i / 8] |= std::uint64_t{bytes[i]} << (8 * (i % 8));
  }
  // Drop stray bits beyond size in the final byte.
  if (size % 64 != 0 && !out.words_.empty()) {
    out.words_.back() &= (std::uint64_t{1} << (size % 64)) - 1;
  }
  return out;
}

}  // namespace privsearch
