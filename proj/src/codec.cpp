#include "privsearch/codec.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "privsearch/error.hpp"
#include "privsearch/infotheory.hpp"

namespace privsearch {

namespace {

// Factors are below 2^13 for any practical block, so four of them fit in a
// 64-bit accumulator with room to spare.
constexpr unsigned long kBatchLimit = 1UL << 50;

mpz_class window_count(std::size_t length, std::size_t lo, std::size_t hi) {
  mpz_class total = 0;
  mpz_class term;
  for (std::size_t w = lo; w <= hi; ++w) {
    mpz_bin_uiui(term.get_mpz_t(), length, w);
    total += term;
  }
  return total;
}

std::size_t bits_for_count(const mpz_class& count) {
  if (count <= 1) return 0;
  mpz_class top = count - 1;
  return mpz_sizeinbase(top.get_mpz_t(), 2);
}

BlockSpec design_block(double p, std::size_t length, double budget, bool allow_clamp) {
  std::vector<double> pmf(length + 1);
  const double n = static_cast<double>(length);
  const double log_p = std::log(p);
  const double log_q = std::log1p(-p);
  for (std::size_t w = 0; w <= length; ++w) {
    const double x = static_cast<double>(w);
    pmf[w] = std::exp(std::lgamma(n + 1.0) - std::lgamma(x + 1.0) - std::lgamma(n - x + 1.0) +
                      x * log_p + (n - x) * log_q);
  }
  // below[w] = P(W < w), above[w] = P(W > w), both summed from the far tail in.
  std::vector<double> below(length + 2, 0.0);
  std::vector<double> above(length + 2, 0.0);
  for (std::size_t w = 1; w <= length + 1; ++w) below[w] = below[w - 1] + pmf[w - 1];
  for (std::size_t w = length; w-- > 0;) above[w] = above[w + 1] + pmf[w + 1];

  const double center = p * n;
  for (std::size_t radius = 0;; ++radius) {
    const double r = static_cast<double>(radius);
    double lo = std::ceil(center - r);
    double hi = std::floor(center + r);
    const bool outside = lo < 0.0 || hi > n;
    if (outside && !allow_clamp) {
      fail(ErrorCode::kInfeasibleBudget,
           "failure budget needs a weight window wider than the block");
    }
    lo = std::max(lo, 0.0);
    hi = std::min(hi, n);
    const auto wlo = static_cast<std::size_t>(lo);
    const auto whi = static_cast<std::size_t>(hi);
    const double tail = (wlo == 0 ? 0.0 : below[wlo]) + (whi == length ? 0.0 : above[whi]);
    if (tail <= budget || (wlo == 0 && whi == length)) {
      BlockSpec spec;
      spec.length = length;
      spec.min_weight = wlo;
      spec.max_weight = whi;
      spec.codeword_bits = bits_for_count(window_count(length, wlo, whi));
      spec.tail_mass = (wlo == 0 && whi == length) ? 0.0 : tail;
      return spec;
    }
  }
}

}  // namespace

CodecParams design_codec(double p, std::size_t message_length, double target_failure,
                         std::size_t block_length) {
  if (!(p > 0.0 && p <= 0.5)) fail(ErrorCode::kDomainError, "codec needs 0 < p <= 1/2");
  if (message_length == 0) fail(ErrorCode::kDomainError, "message length must be positive");
  if (block_length == 0) fail(ErrorCode::kDomainError, "block length must be positive");
  if (!(target_failure >= 0.0)) fail(ErrorCode::kDomainError, "target failure must be >= 0");

  CodecParams params;
  params.p = p;
  params.message_length = message_length;
  params.block_length = std::min(block_length, message_length);
  params.target_failure = target_failure;

  const std::size_t n = params.block_length;
  const std::size_t full = message_length / n;
  const std::size_t tail_length = message_length % n;
  params.blocks_per_message = full + (tail_length ? 1 : 0);

  if (p == 0.5) {
    params.identity = true;
    params.min_weight = 0;
    params.max_weight = n;
    params.codeword_bits = n;
    params.total_bits = message_length;
    for (std::size_t i = 0; i < params.blocks_per_message; ++i) {
      const std::size_t len = (i < full) ? n : tail_length;
      params.blocks.push_back({len, 0, len, len, 0.0});
    }
    return params;
  }

  const double budget = target_failure / static_cast<double>(params.blocks_per_message);
  const BlockSpec spec = design_block(p, n, budget, false);
  params.blocks.assign(full, spec);
  if (tail_length) params.blocks.push_back(design_block(p, tail_length, budget, true));

  params.min_weight = spec.min_weight;
  params.max_weight = spec.max_weight;
  params.codeword_bits = spec.codeword_bits;
  CompensatedSum failure;
  for (const auto& block : params.blocks) {
    params.total_bits += block.codeword_bits;
    failure.add(block.tail_mass);
  }
  params.predicted_failure = failure.value();
  params.overhead = static_cast<double>(params.total_bits) /
                        (static_cast<double>(message_length) * binary_entropy(p)) -
                    1.0;
  return params;
}

namespace {

// Tracks value = C(c, j) (zero when j > c) under unit moves of c and j.
class BinomialCursor {
 public:
  BinomialCursor(unsigned long c, unsigned long j) : c_(c), j_(j) {
    mpz_bin_uiui(value_.get_mpz_t(), c, j);
  }

  const mpz_class& value() const { return value_; }
  unsigned long c() const { return c_; }
  unsigned long j() const { return j_; }

  // (c, j) -> (target, j), target >= c.
  void raise_c(unsigned long target) {
    if (target < j_) {
      c_ = target;
      value_ = 0;
      return;
    }
    if (c_ < j_) {
      c_ = j_;
      value_ = 1;
    }
    unsigned long num = 1;
    unsigned long den = 1;
    for (unsigned long x = c_ + 1; x <= target; ++x) {
      if (num >= kBatchLimit / x) flush(num, den);
      num *= x;
      den *= x - j_;
    }
    flush(num, den);
    c_ = target;
  }

  // (c, j) -> (c, j + 1)
  void raise_j() {
    if (j_ + 1 > c_) {
      value_ = 0;
    } else {
      value_ *= c_ - j_;
      mpz_divexact_ui(value_.get_mpz_t(), value_.get_mpz_t(), j_ + 1);
    }
    ++j_;
  }

  // (c, j) -> (c - 1, j), c >= 1.
  void lower_c() {
    if (j_ > c_ - 1) {
      value_ = 0;
    } else if (j_ == 0) {
      value_ = 1;
    } else {
      value_ *= c_ - j_;
      mpz_divexact_ui(value_.get_mpz_t(), value_.get_mpz_t(), c_);
    }
    --c_;
  }

  // (c, j) -> (c, j - 1), j >= 1.
  void lower_j() {
    if (j_ - 1 > c_) {
      value_ = 0;
    } else if (j_ > c_) {
      value_ = 1;
    } else {
      value_ *= j_;
      mpz_divexact_ui(value_.get_mpz_t(), value_.get_mpz_t(), c_ - j_ + 1);
    }
    --j_;
  }

 private:
  void flush(unsigned long& num, unsigned long& den) {
    if (num != 1) value_ *= num;
    if (den != 1) mpz_divexact_ui(value_.get_mpz_t(), value_.get_mpz_t(), den);
    num = 1;
    den = 1;
  }

  unsigned long c_;
  unsigned long j_;
  mpz_class value_;
};

struct WindowTable {
  std::size_t min_weight = 0;
  std::size_t max_weight = 0;
  std::vector<mpz_class> offsets;  // offsets[w - min] = #in-window sequences of weight < w
  mpz_class total;
};

WindowTable make_table(const BlockSpec& spec) {
  WindowTable table;
  table.min_weight = spec.min_weight;
  table.max_weight = spec.max_weight;
  mpz_class running = 0;
  mpz_class term;
  for (std::size_t w = spec.min_weight; w <= spec.max_weight; ++w) {
    table.offsets.push_back(running);
    mpz_bin_uiui(term.get_mpz_t(), spec.length, w);
    running += term;
  }
  table.total = running;
  return table;
}

// Lexicographic rank (0 before 1) of a weight-w block among weight-w blocks:
// sum over ones of C(c, j), c counted from the block's last position and j the
// number of ones at or after that position.
mpz_class rank_block(const BitVector& bits, std::size_t start, std::size_t length) {
  mpz_class rank = 0;
  BinomialCursor cursor(0, 0);
  for (std::size_t c = 0; c < length; ++c) {
    if (!bits.get(start + length - 1 - c)) continue;
    cursor.raise_j();
    cursor.raise_c(c);
    rank += cursor.value();
  }
  return rank;
}

void unrank_block(mpz_class rank, std::size_t weight, std::size_t length, BitVector& out,
                  std::size_t start) {
  if (weight == 0) return;
  BinomialCursor cursor(length - 1, weight);
  while (true) {
    while (cursor.value() > rank) cursor.lower_c();
    out.set(start + length - 1 - cursor.c(), true);
    rank -= cursor.value();
    if (cursor.j() == 1) return;
    cursor.lower_j();
    cursor.lower_c();
  }
}

}  // namespace

struct TypicalSetCodec::Tables {
  std::map<std::size_t, WindowTable> by_length;
};

TypicalSetCodec::TypicalSetCodec(CodecParams params)
    : params_(std::move(params)), tables_(std::make_unique<Tables>()) {
  if (params_.identity) return;
  for (const auto& block : params_.blocks) {
    if (!tables_->by_length.contains(block.length)) {
      tables_->by_length.emplace(block.length, make_table(block));
    }
  }
}

TypicalSetCodec::~TypicalSetCodec() = default;
TypicalSetCodec::TypicalSetCodec(TypicalSetCodec&&) noexcept = default;
TypicalSetCodec& TypicalSetCodec::operator=(TypicalSetCodec&&) noexcept = default;

EncodedMessage TypicalSetCodec::encode(const BitVector& message) const {
  if (message.size() != params_.message_length) {
    fail(ErrorCode::kLengthMismatch, "message length " + std::to_string(message.size()) +
                                         " does not match codec L = " +
                                         std::to_string(params_.message_length));
  }
  EncodedMessage out;
  if (params_.identity) {
    out.codeword = message;
    return out;
  }

  out.codeword = BitVector(params_.total_bits);
  std::size_t in_offset = 0;
  std::size_t out_offset = 0;
  for (const auto& block : params_.blocks) {
    const WindowTable& table = tables_->by_length.at(block.length);
    const std::size_t weight = message.popcount(in_offset, in_offset + block.length);
    mpz_class rank = 0;
    if (weight < table.min_weight || weight > table.max_weight) {
      out.atypical = true;
    } else {
      rank = table.offsets[weight - table.min_weight] +
             rank_block(message, in_offset, block.length);
    }
    for (std::size_t t = 0; t < block.codeword_bits; ++t) {
      if (mpz_tstbit(rank.get_mpz_t(), t)) out.codeword.set(out_offset + t, true);
    }
    in_offset += block.length;
    out_offset += block.codeword_bits;
  }
  return out;
}

std::optional<BitVector> TypicalSetCodec::decode(const BitVector& codeword) const {
  if (codeword.size() != params_.total_bits) {
    fail(ErrorCode::kLengthMismatch, "codeword length " + std::to_string(codeword.size()) +
                                         " does not match codec B = " +
                                         std::to_string(params_.total_bits));
  }
  if (params_.identity) return codeword;

  BitVector message(params_.message_length);
  std::size_t in_offset = 0;
  std::size_t out_offset = 0;
  for (const auto& block : params_.blocks) {
    const WindowTable& table = tables_->by_length.at(block.length);
    mpz_class rank = 0;
    for (std::size_t t = 0; t < block.codeword_bits; ++t) {
      if (codeword.get(in_offset + t)) mpz_setbit(rank.get_mpz_t(), t);
    }
    if (rank >= table.total) return std::nullopt;

    const auto it = std::upper_bound(table.offsets.begin(), table.offsets.end(), rank);
    const auto index = static_cast<std::size_t>(it - table.offsets.begin()) - 1;
    unrank_block(rank - table.offsets[index], table.min_weight + index, block.length, message,
                 out_offset);
    in_offset += block.codeword_bits;
    out_offset += block.length;
  }
  return message;
}

EncodedMessage encode(const BitVector& message, const CodecParams& params) {
  return TypicalSetCodec(params).encode(message);
}

std::optional<BitVector> decode_codeword(const BitVector& codeword, const CodecParams& params) {
  return TypicalSetCodec(params).decode(codeword);
}

}  // namespace privsearch
