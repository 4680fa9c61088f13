#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "privsearch/bitvector.hpp"
#include "privsearch/codec.hpp"
#include "privsearch/patterns.hpp"

namespace privsearch {

struct Dataset {
  std::uint32_t alphabet_size = 0;  // K
  std::vector<std::uint32_t> records;  // L values in [1, K]
  std::uint64_t seed = 0;

  std::size_t length() const noexcept { return records.size(); }
};

// L i.i.d. uniform draws from [1, K]. DomainError unless K >= 2 and L >= 1.
Dataset generate_dataset(std::uint32_t alphabet_size, std::size_t length, std::uint64_t seed);

struct MessageBits {
  std::size_t index = 0;  // pattern index m (0 when the pattern is ad hoc)
  BitVector bits;

  friend bool operator==(const MessageBits&, const MessageBits&) = default;
};

// bits[l] = 1 iff record l lies in the pattern. IndexOutOfRange if the pattern
// leaves [1, K].
MessageBits derive_message(const Dataset& dataset, std::span<const std::uint32_t> pattern,
                           std::size_t index = 0);
std::vector<MessageBits> derive_messages(const Dataset& dataset, const PatternFamily& family);

// Query coefficient vectors index (message m, chunk j) as (m-1)(N-1) + (j-1).
struct Query {
  std::uint8_t server_id = 0;  // 1-based
  BitVector coefficients;      // length mu (N-1)
};

struct Answer {
  std::uint8_t server_id = 0;
  BitVector payload;  // length B' = ceil(B / (N-1))
};

// Wire form: server_id (u8), bit length (u32 little-endian), then
// ceil(length/8) bytes with bit i in byte i/8 at bit position i%8.
std::vector<std::uint8_t> serialize(const Query& query);
std::vector<std::uint8_t> serialize(const Answer& answer);
Query parse_query(std::span<const std::uint8_t> bytes);
Answer parse_answer(std::span<const std::uint8_t> bytes);

std::size_t coefficient_index(std::size_t message, std::size_t chunk, std::size_t server_count);

// Server 1 receives the mask h; server n >= 2 receives h XOR e_(theta, n-1).
// The map h -> query is a bijection for every (theta, n).
BitVector query_for_server(const BitVector& mask, std::size_t theta, std::size_t server,
                           std::size_t server_count);

struct ClientQueries {
  std::vector<Query> queries;  // servers 1..N
  BitVector mask;              // h
};

// h uniform over {0,1}^{mu (N-1)}. DomainError unless N >= 2 and theta in [1, mu].
ClientQueries client_queries(std::size_t theta, std::size_t message_count,
                             std::size_t server_count, std::uint64_t seed);

// Each codeword split into N-1 chunks of B' bits, zero-padded at the end.
struct ChunkedMessages {
  std::size_t server_count = 0;
  std::size_t chunk_bits = 0;  // B'
  std::size_t codeword_bits = 0;  // B
  std::vector<std::vector<BitVector>> chunks;  // [m-1][j-1]
};

ChunkedMessages chunk_codewords(std::span<const BitVector> codewords, std::size_t server_count);

// XOR of the chunks selected by the query. LayoutMismatch on size mismatch.
Answer server_answer(const Query& query, const ChunkedMessages& messages);

// Chunk j of X_theta is answer_{j+1} XOR answer_1; the reassembled codeword
// is then decoded. nullopt when the codeword is not a valid code image.
// LengthMismatch when answers disagree in length or count.
std::optional<MessageBits> client_decode(std::span<const Answer> answers, std::size_t theta,
                                         const TypicalSetCodec& codec);

struct SessionSeeds {
  std::uint64_t dataset = 0;
  std::uint64_t query = 0;
};

inline constexpr double kDefaultCodecTarget = 1e-3;

struct SessionTranscript {
  std::size_t theta = 0;
  std::size_t server_count = 0;
  std::size_t message_length = 0;  // L
  std::vector<Query> queries;
  std::vector<std::size_t> answer_bits;  // per server
  std::size_t download_bits = 0;         // D
  bool success = false;                  // decoded W_theta matches exactly
  bool atypical = false;                 // W_theta had an out-of-window block
  std::optional<MessageBits> decoded;
  double measured_rate = 0.0;            // L H2(M/K) / D
};

// Balanced family required (NotBalanced otherwise); p = M/K must be <= 1/2.
SessionTranscript run_session(const PatternFamily& family, std::size_t server_count,
                              std::size_t message_length, std::size_t theta, SessionSeeds seeds,
                              double codec_target = kDefaultCodecTarget);

struct RateReport {
  std::size_t trials = 0;
  std::size_t failures = 0;
  std::size_t atypical_sessions = 0;
  double empirical_error = 0.0;      // P_e
  double mean_measured_rate = 0.0;
  std::size_t download_bits = 0;
  double achievable_rate = 0.0;      // (1 - 1/N) H_min / H_max
  double converse_rate_bound = 0.0;  // H_min / best per-record converse
  std::string converse_strategy;
  CodecParams codec;
};

// Trial t asks for theta = 1 + (t mod mu) with seeds derived from (seed, t).
RateReport rate_experiment(const PatternFamily& family, std::size_t server_count,
                           std::size_t message_length, std::size_t trials, std::uint64_t seed,
                           double codec_target = kDefaultCodecTarget);

// Ships the raw dataset from one server (ceil(log2 K) bits per record).
SessionTranscript baseline_download_all(const PatternFamily& family, std::size_t server_count,
                                        std::size_t message_length, std::size_t theta,
                                        std::uint64_t seed);

}  // namespace privsearch
