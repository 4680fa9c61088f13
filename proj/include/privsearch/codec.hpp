#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "privsearch/bitvector.hpp"

namespace privsearch {

inline constexpr std::size_t kDefaultBlockLength = 4096;

// One block of the fixed-length typical-set code: blocks whose weight lies in
// [min_weight, max_weight] are stored as their lexicographic rank among all
// in-window sequences, in codeword_bits bits.
struct BlockSpec {
  std::size_t length = 0;
  std::size_t min_weight = 0;
  std::size_t max_weight = 0;
  std::size_t codeword_bits = 0;
  double tail_mass = 0.0;  // P(weight outside window) under Bernoulli(p)
};

struct CodecParams {
  double p = 0.5;
  std::size_t message_length = 0;  // L
  std::size_t block_length = 0;    // n
  std::size_t min_weight = 0;      // window of a full-length block
  std::size_t max_weight = 0;
  std::size_t codeword_bits = 0;   // b for a full-length block
  std::size_t blocks_per_message = 0;
  std::size_t total_bits = 0;      // B
  double target_failure = 0.0;
  double predicted_failure = 0.0;  // union bound over blocks
  double overhead = 0.0;           // B / (L H2(p)) - 1
  bool identity = false;           // p = 1/2: codeword is the message
  std::vector<BlockSpec> blocks;   // in message order; the last may be short
};

// Chooses the narrowest symmetric window around p n per block whose tail
// masses sum to at most target_failure. p = 1/2 gives the identity codec.
// Errors: DomainError (p outside (0, 1/2], L = 0), InfeasibleBudget.
CodecParams design_codec(double p, std::size_t message_length, double target_failure,
                         std::size_t block_length = kDefaultBlockLength);

struct EncodedMessage {
  BitVector codeword;
  // Some block fell outside its window and was replaced by rank 0.
  bool atypical = false;
};

// Enumerative coder for one CodecParams; caches the per-window rank offsets.
class TypicalSetCodec {
 public:
  explicit TypicalSetCodec(CodecParams params);
  ~TypicalSetCodec();
  TypicalSetCodec(TypicalSetCodec&&) noexcept;
  TypicalSetCodec& operator=(TypicalSetCodec&&) noexcept;

  const CodecParams& params() const noexcept { return params_; }

  // LengthMismatch unless message.size() == L.
  EncodedMessage encode(const BitVector& message) const;
  // nullopt when some block holds a rank past the window's sequence count.
  // LengthMismatch unless codeword.size() == B.
  std::optional<BitVector> decode(const BitVector& codeword) const;

 private:
  struct Tables;
  CodecParams params_;
  std::unique_ptr<Tables> tables_;
};

EncodedMessage encode(const BitVector& message, const CodecParams& params);
std::optional<BitVector> decode_codeword(const BitVector& codeword, const CodecParams& params);

}  // namespace privsearch
