#include <gtest/gtest.h>

#include <cmath>

#include "privsearch/bitvector.hpp"
#include "privsearch/constructions.hpp"
#include "privsearch/error.hpp"
#include "privsearch/protocol.hpp"
#include "privsearch/random.hpp"

using namespace privsearch;

namespace {

BitVector from_string(const std::string& s) {
  BitVector v(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) v.set(i, s[i] == '1');
  return v;
}

}  // namespace

TEST(BitVector, XorSliceAssign) {
  auto a = from_string("1100101");
  const auto b = from_string("1010100");
  EXPECT_EQ(a ^ b, from_string("0110001"));
  EXPECT_EQ(a.slice(4, 5), from_string("10100"));
  a.assign(1, from_string("00"));
  EXPECT_EQ(a, from_string("1000101"));
  EXPECT_EQ(a.popcount(), 3u);
  EXPECT_EQ(a.popcount(1, 5), 1u);
  EXPECT_THROW(a ^= BitVector(3), Error);
}

TEST(BitVector, ByteRoundTrip) {
  const auto v = from_string("10000000011");
  const auto bytes = v.to_bytes();
  ASSERT_EQ(bytes.size(), 2u);
  EXPECT_EQ(bytes[0], 0x01);
  EXPECT_EQ(bytes[1], 0x06);
  EXPECT_EQ(BitVector::from_bytes(bytes, 11), v);
}

TEST(Random, DeterministicAndInRange) {
  Rng a(42);
  Rng b(42);
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.below(7);
    EXPECT_EQ(x, b.below(7));
    EXPECT_LT(x, 7u);
  }
  EXPECT_NE(derive_seed(1, 0, 0), derive_seed(1, 1, 0));
  EXPECT_NE(derive_seed(1, 0, 0), derive_seed(1, 0, 1));
  EXPECT_EQ(derive_seed(5, 2, 9), derive_seed(5, 2, 9));
}

TEST(Dataset, UniformFrequencies) {
  const auto d = generate_dataset(4, 100000, 11);
  std::vector<double> counts(5, 0.0);
  for (auto r : d.records) {
    ASSERT_GE(r, 1u);
    ASSERT_LE(r, 4u);
    counts[r] += 1.0;
  }
  const double sigma = std::sqrt(100000 * 0.25 * 0.75);
  for (int v = 1; v <= 4; ++v) EXPECT_LE(std::abs(counts[v] - 25000.0), 4 * sigma);
}

TEST(Dataset, ErrorsAndDeterminism) {
  EXPECT_THROW(generate_dataset(1, 10, 0), Error);
  EXPECT_THROW(generate_dataset(4, 0, 0), Error);
  EXPECT_EQ(generate_dataset(9, 500, 3).records, generate_dataset(9, 500, 3).records);
  EXPECT_NE(generate_dataset(9, 500, 3).records, generate_dataset(9, 500, 4).records);
}

TEST(DeriveMessage, FullAlphabetIsAllOnes) {
  const auto d = generate_dataset(5, 300, 1);
  const std::vector<std::uint32_t> all{1, 2, 3, 4, 5};
  EXPECT_EQ(derive_message(d, all).bits.popcount(), 300u);
  const std::vector<std::uint32_t> bad{6};
  EXPECT_THROW(derive_message(d, bad), Error);
}

TEST(DeriveMessage, PartitionsSumToOne) {
  for (const auto& f : {exact_search_family(7), disjoint_subfamily(6, 2)}) {
    const auto d = generate_dataset(f.alphabet_size(), 1000, 2);
    const auto msgs = derive_messages(d, f);
    for (std::size_t l = 0; l < 1000; ++l) {
      int ones = 0;
      for (const auto& m : msgs) ones += m.bits.get(l);
      EXPECT_EQ(ones, 1);
    }
  }
}

TEST(Queries, TwoServersTwoMessages) {
  const auto c = client_queries(1, 2, 2, 5);
  ASSERT_EQ(c.queries.size(), 2u);
  EXPECT_EQ(c.queries[0].coefficients, c.mask);
  EXPECT_EQ(c.queries[1].coefficients ^ c.queries[0].coefficients, from_string("10"));
  EXPECT_EQ(c.queries[0].server_id, 1);
  EXPECT_EQ(c.queries[1].server_id, 2);
}

TEST(Queries, OffsetIsUnitVector) {
  const std::size_t mu = 5;
  const std::size_t n = 4;
  for (std::size_t theta = 1; theta <= mu; ++theta) {
    const auto c = client_queries(theta, mu, n, theta * 17);
    for (std::size_t s = 2; s <= n; ++s) {
      BitVector e(mu * (n - 1));
      e.set(coefficient_index(theta, s - 1, n), true);
      EXPECT_EQ(c.queries[s - 1].coefficients ^ c.queries[0].coefficients, e);
    }
  }
  EXPECT_THROW(client_queries(0, 3, 2, 0), Error);
  EXPECT_THROW(client_queries(4, 3, 2, 0), Error);
  EXPECT_THROW(client_queries(1, 3, 1, 0), Error);
}

TEST(Answers, LinearAndSelective) {
  Rng rng(8);
  const std::size_t mu = 3;
  const std::size_t n = 3;
  std::vector<BitVector> codewords;
  for (std::size_t m = 0; m < mu; ++m) codewords.push_back(rng.bits(101));
  const auto stored = chunk_codewords(codewords, n);
  EXPECT_EQ(stored.chunk_bits, 51u);

  const Query zero{1, BitVector(mu * (n - 1))};
  EXPECT_EQ(server_answer(zero, stored).payload, BitVector(51));

  Query pick{1, BitVector(mu * (n - 1))};
  pick.coefficients.set(coefficient_index(1, 1, n), true);
  EXPECT_EQ(server_answer(pick, stored).payload, codewords[0].slice(0, 51));

  for (int t = 0; t < 20; ++t) {
    const Query q1{1, rng.bits(mu * (n - 1))};
    const Query q2{1, rng.bits(mu * (n - 1))};
    const Query q12{1, q1.coefficients ^ q2.coefficients};
    EXPECT_EQ(server_answer(q12, stored).payload,
              server_answer(q1, stored).payload ^ server_answer(q2, stored).payload);
  }
  const Query wrong{1, BitVector(4)};
  EXPECT_THROW(server_answer(wrong, stored), Error);
}

TEST(Decode, HonestAndCorrupted) {
  const auto f = circular_family(8);
  const auto codec = TypicalSetCodec(design_codec(0.5, 999, 1e-3));
  const auto d = generate_dataset(8, 999, 4);
  const auto msgs = derive_messages(d, f);
  std::vector<BitVector> cw;
  for (const auto& m : msgs) cw.push_back(codec.encode(m.bits).codeword);
  const auto stored = chunk_codewords(cw, 3);
  const auto c = client_queries(6, f.size(), 3, 77);
  std::vector<Answer> answers;
  for (const auto& q : c.queries) answers.push_back(server_answer(q, stored));
  const auto decoded = client_decode(answers, 6, codec);
  ASSERT_TRUE(decoded.has_value());
  EXPECT_EQ(decoded->bits, msgs[5].bits);

  answers[1].payload.flip(10);
  const auto bad = client_decode(answers, 6, codec);
  ASSERT_TRUE(bad.has_value());
  EXPECT_NE(bad->bits, msgs[5].bits);

  answers[2].payload = BitVector(7);
  EXPECT_THROW(client_decode(answers, 6, codec), Error);
}

TEST(Session, IdentityCodecAccounting) {
  const auto f = disjoint_subfamily(8, 4);
  const auto four = build_family(8, {{1, 2, 3, 4}, {5, 6, 7, 8}, {1, 3, 5, 7}, {2, 4, 6, 8}}, "");
  const auto t = run_session(four, 2, 4096, 3, {1, 2});
  EXPECT_TRUE(t.success);
  EXPECT_EQ(t.download_bits, 2u * 4096u);
  EXPECT_DOUBLE_EQ(t.measured_rate, 0.5);
  EXPECT_EQ(t.queries.size(), 2u);
  EXPECT_TRUE(run_session(f, 3, 1000, 2, {5, 6}).success);
}

TEST(Session, CompressedHonest) {
  const auto f = disjoint_subfamily(16, 4);
  for (std::size_t theta = 1; theta <= 4; ++theta) {
    const auto t = run_session(f, 3, 20000, theta, {theta, theta + 100});
    EXPECT_EQ(t.success, !t.atypical);
    EXPECT_GT(t.measured_rate, 0.9 * (2.0 / 3.0));
  }
}

TEST(Session, Unbalanced) {
  const auto f = build_family(6, {{1}, {2, 3}}, "");
  EXPECT_THROW(run_session(f, 2, 100, 1, {1, 1}), Error);
}

TEST(RateExperiment, SandwichHolds) {
  const auto r = rate_experiment(disjoint_subfamily(8, 2), 2, 8192, 8, 3);
  EXPECT_EQ(r.trials, 8u);
  EXPECT_LE(r.mean_measured_rate, r.converse_rate_bound);
  EXPECT_LE(r.achievable_rate, r.converse_rate_bound + 1e-12);
  EXPECT_EQ(r.converse_strategy, "exhaustive");
}

TEST(RateExperiment, Deterministic) {
  const auto f = exact_search_family(4);
  const auto a = rate_experiment(f, 2, 3000, 6, 9);
  const auto b = rate_experiment(f, 2, 3000, 6, 9);
  EXPECT_EQ(a.failures, b.failures);
  EXPECT_EQ(a.mean_measured_rate, b.mean_measured_rate);
}

TEST(Wire, QueryLayout) {
  const Query q{3, from_string("1000000001")};
  const auto bytes = serialize(q);
  ASSERT_EQ(bytes.size(), 1u + 4u + 2u);
  EXPECT_EQ(bytes[0], 3);
  EXPECT_EQ(bytes[1], 10);
  EXPECT_EQ(bytes[2], 0);
  EXPECT_EQ(bytes[5], 0x01);
  EXPECT_EQ(bytes[6], 0x02);
  const auto back = parse_query(bytes);
  EXPECT_EQ(back.server_id, 3);
  EXPECT_EQ(back.coefficients, q.coefficients);
}

TEST(Wire, AnswerRoundTripAndErrors) {
  Rng rng(1);
  const Answer a{7, rng.bits(1000)};
  auto bytes = serialize(a);
  const auto back = parse_answer(bytes);
  EXPECT_EQ(back.server_id, 7);
  EXPECT_EQ(back.payload, a.payload);
  bytes.pop_back();
  EXPECT_THROW(parse_answer(bytes), Error);
  const std::vector<std::uint8_t> tiny{1, 2};
  EXPECT_THROW(parse_query(tiny), Error);
}

TEST(Baseline, DownloadsEverything) {
  const auto f = exact_search_family(16);
  const auto t = baseline_download_all(f, 2, 1000, 5, 3);
  EXPECT_TRUE(t.success);
  EXPECT_EQ(t.download_bits, 4000u);
}

TEST(BitVector, WordLevelSliceAndAssignMatchBitwise) {
  Rng rng(21);
  const auto src = rng.bits(517);
  for (std::size_t begin : {0u, 1u, 63u, 64u, 65u, 200u, 500u, 517u, 600u}) {
    for (std::size_t count : {0u, 1u, 63u, 64u, 65u, 130u, 300u}) {
      const auto s = src.slice(begin, count);
      for (std::size_t i = 0; i < count; ++i) {
        const bool expected = begin + i < src.size() && src.get(begin + i);
        ASSERT_EQ(s.get(i), expected) << begin << " " << count << " " << i;
      }
      if (begin + count > src.size()) continue;
      auto dst = rng.bits(src.size());
      const auto before = dst;
      dst.assign(begin, s);
      for (std::size_t i = 0; i < dst.size(); ++i) {
        const bool inside = i >= begin && i < begin + count;
        ASSERT_EQ(dst.get(i), inside ? s.get(i - begin) : before.get(i));
      }
    }
  }
}
