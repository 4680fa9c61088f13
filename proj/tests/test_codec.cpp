#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "privsearch/codec.hpp"
#include "privsearch/error.hpp"
#include "privsearch/infotheory.hpp"

using namespace privsearch;

namespace {

BitVector bernoulli(std::size_t n, double p, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::bernoulli_distribution coin(p);
  BitVector v(n);
  for (std::size_t i = 0; i < n; ++i) v.set(i, coin(gen));
  return v;
}

std::uint64_t as_integer(const BitVector& v) {
  std::uint64_t x = 0;
  for (std::size_t i = 0; i < v.size(); ++i) x |= static_cast<std::uint64_t>(v.get(i)) << i;
  return x;
}

}  // namespace

TEST(DesignCodec, IdentityAtHalf) {
  const auto p = design_codec(0.5, 1000, 1e-3);
  EXPECT_TRUE(p.identity);
  EXPECT_EQ(p.total_bits, 1000u);
  EXPECT_EQ(p.predicted_failure, 0.0);
  const TypicalSetCodec codec(p);
  const auto msg = bernoulli(1000, 0.5, 3);
  const auto enc = codec.encode(msg);
  EXPECT_EQ(enc.codeword, msg);
  EXPECT_EQ(codec.decode(enc.codeword), msg);
}

TEST(DesignCodec, QuarterAt64k) {
  const auto p = design_codec(0.25, 65536, 1e-3);
  EXPECT_FALSE(p.identity);
  EXPECT_EQ(p.blocks_per_message, 16u);
  EXPECT_EQ(p.min_weight, 913u);
  EXPECT_EQ(p.max_weight, 1135u);
  EXPECT_EQ(p.codeword_bits, 3483u);
  const double ratio = static_cast<double>(p.total_bits) / 65536.0;
  EXPECT_DOUBLE_EQ(ratio, 0.850341796875);
  EXPECT_GE(ratio, binary_entropy(0.25));
  EXPECT_LE(ratio, 1.08 * binary_entropy(0.25));
  EXPECT_LE(p.predicted_failure, 1e-3);
}

TEST(DesignCodec, CodewordBitsAreMinimal) {
  // b is the bit length of (#in-window sequences - 1).
  const auto p = design_codec(0.25, 20, 0.2, 20);
  long double count = 0;
  for (std::size_t w = p.min_weight; w <= p.max_weight; ++w) {
    count += std::tgamma(21.0L) / (std::tgamma(w + 1.0L) * std::tgamma(21.0L - w));
  }
  EXPECT_EQ(p.codeword_bits, static_cast<std::size_t>(std::ceil(std::log2(count))));
}

TEST(DesignCodec, Errors) {
  EXPECT_THROW(design_codec(0.25, 1000, 0.0), Error);
  try {
    design_codec(0.25, 1000, 0.0);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInfeasibleBudget);
  }
  EXPECT_THROW(design_codec(0.6, 1000, 1e-3), Error);
  EXPECT_THROW(design_codec(0.0, 1000, 1e-3), Error);
  EXPECT_THROW(design_codec(0.25, 0, 1e-3), Error);
}

TEST(TypicalSetCodec, RankMatchesEnumerationOracle) {
  const auto p = design_codec(0.25, 12, 0.3, 12);
  ASSERT_EQ(p.blocks_per_message, 1u);
  const auto order = oracle::window_sequences(12, p.min_weight, p.max_weight);
  const TypicalSetCodec codec(p);
  for (std::size_t r = 0; r < order.size(); ++r) {
    BitVector msg(12);
    for (std::size_t i = 0; i < 12; ++i) msg.set(i, order[r][i]);
    const auto enc = codec.encode(msg);
    EXPECT_FALSE(enc.atypical);
    ASSERT_EQ(as_integer(enc.codeword), r);
    EXPECT_EQ(codec.decode(enc.codeword), msg);
  }
  // Ranks past the last in-window sequence are not code images.
  for (std::uint64_t r = order.size(); r < (std::uint64_t{1} << p.codeword_bits); ++r) {
    BitVector cw(p.codeword_bits);
    for (std::size_t i = 0; i < p.codeword_bits; ++i) cw.set(i, (r >> i) & 1U);
    EXPECT_FALSE(codec.decode(cw).has_value());
  }
}

TEST(TypicalSetCodec, AllZeroBlockIsAtypical) {
  const auto p = design_codec(0.25, 4096, 1e-3);
  ASSERT_GT(p.min_weight, 0u);
  const auto enc = encode(BitVector(4096), p);
  EXPECT_TRUE(enc.atypical);
  EXPECT_NE(decode_codeword(enc.codeword, p), BitVector(4096));
}

TEST(TypicalSetCodec, RoundTripRandomMessages) {
  for (double prob : {0.25, 0.0625, 0.4}) {
    const auto p = design_codec(prob, 65536, 1e-3);
    const TypicalSetCodec codec(p);
    for (std::uint64_t s = 0; s < 3; ++s) {
      const auto msg = bernoulli(65536, prob, 100 + s);
      const auto enc = codec.encode(msg);
      if (enc.atypical) continue;
      EXPECT_EQ(enc.codeword.size(), p.total_bits);
      EXPECT_EQ(codec.decode(enc.codeword), msg);
    }
  }
}

TEST(TypicalSetCodec, ShortTailBlock) {
  const auto p = design_codec(0.25, 10000, 1e-3);
  ASSERT_EQ(p.blocks.size(), 3u);
  EXPECT_EQ(p.blocks.back().length, 10000u - 2 * 4096u);
  std::size_t total = 0;
  for (const auto& b : p.blocks) total += b.codeword_bits;
  EXPECT_EQ(total, p.total_bits);
  const auto msg = bernoulli(10000, 0.25, 9);
  const auto enc = encode(msg, p);
  ASSERT_FALSE(enc.atypical);
  EXPECT_EQ(decode_codeword(enc.codeword, p), msg);
}

TEST(TypicalSetCodec, LengthMismatch) {
  const TypicalSetCodec codec(design_codec(0.25, 5000, 1e-3));
  EXPECT_THROW(codec.encode(BitVector(4999)), Error);
  EXPECT_THROW(codec.decode(BitVector(3)), Error);
}
