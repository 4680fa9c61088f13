#include "privsearch/protocol.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <thread>

#include "privsearch/bounds.hpp"
#include "privsearch/error.hpp"
#include "privsearch/infotheory.hpp"
#include "privsearch/random.hpp"

namespace privsearch {

Dataset generate_dataset(std::uint32_t alphabet_size, std::size_t length, std::uint64_t seed) {
  if (alphabet_size < 2) fail(ErrorCode::kDomainError, "dataset needs K >= 2");
  if (length < 1) fail(ErrorCode::kDomainError, "dataset needs L >= 1");
  Dataset dataset;
  dataset.alphabet_size = alphabet_size;
  dataset.seed = seed;
  dataset.records.resize(length);
  Rng rng(seed);
  for (auto& record : dataset.records) {
    record = static_cast<std::uint32_t>(rng.below(alphabet_size)) + 1;
  }
  return dataset;
}

MessageBits derive_message(const Dataset& dataset, std::span<const std::uint32_t> pattern,
                           std::size_t index) {
  std::vector<std::uint8_t> member(dataset.alphabet_size + 1, 0);
  for (std::uint32_t v : pattern) {
    if (v < 1 || v > dataset.alphabet_size) {
      fail(ErrorCode::kIndexOutOfRange, "pattern value " + std::to_string(v) + " outside [1, " +
                                            std::to_string(dataset.alphabet_size) + "]");
    }
    member[v] = 1;
  }
  MessageBits out{index, BitVector(dataset.length())};
  for (std::size_t l = 0; l < dataset.length(); ++l) {
    if (member[dataset.records[l]]) out.bits.set(l, true);
  }
  return out;
}

std::vector<MessageBits> derive_messages(const Dataset& dataset, const PatternFamily& family) {
  if (family.alphabet_size() != dataset.alphabet_size) {
    fail(ErrorCode::kDomainError, "family and dataset disagree on K");
  }
  std::vector<MessageBits> out;
  out.reserve(family.size());
  for (std::size_t m = 1; m <= family.size(); ++m) {
    out.push_back(derive_message(dataset, family.pattern(m), m));
  }
  return out;
}

namespace {

std::vector<std::uint8_t> serialize_record(std::uint8_t server_id, const BitVector& bits) {
  if (bits.size() > 0xffffffffULL) fail(ErrorCode::kDomainError, "bit string too long for wire");
  std::vector<std::uint8_t> out;
  out.reserve(5 + (bits.size() + 7) / 8);
  out.push_back(server_id);
  const auto length = static_cast<std::uint32_t>(bits.size());
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(length >> (8 * i)));
  const auto payload = bits.to_bytes();
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

std::pair<std::uint8_t, BitVector> parse_record(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 5) fail(ErrorCode::kParseError, "wire record shorter than its header");
  std::uint32_t length = 0;
  for (int i = 0; i < 4; ++i) length |= std::uint32_t{bytes[1 + i]} << (8 * i);
  const std::size_t payload = (static_cast<std::size_t>(length) + 7) / 8;
  if (bytes.size() != 5 + payload) {
    fail(ErrorCode::kParseError, "wire record length prefix does not match payload");
  }
  return {bytes[0], BitVector::from_bytes(bytes.subspan(5), length)};
}

}  // namespace

std::vector<std::uint8_t> serialize(const Query& query) {
  return serialize_record(query.server_id, query.coefficients);
}

std::vector<std::uint8_t> serialize(const Answer& answer) {
  return serialize_record(answer.server_id, answer.payload);
}

Query parse_query(std::span<const std::uint8_t> bytes) {
  auto [id, bits] = parse_record(bytes);
  return {id, std::move(bits)};
}

Answer parse_answer(std::span<const std::uint8_t> bytes) {
  auto [id, bits] = parse_record(bytes);
  return {id, std::move(bits)};
}

std::size_t coefficient_index(std::size_t message, std::size_t chunk, std::size_t server_count) {
  return (message - 1) * (server_count - 1) + (chunk - 1);
}

BitVector query_for_server(const BitVector& mask, std::size_t theta, std::size_t server,
                           std::size_t server_count) {
  BitVector query = mask;
  if (server >= 2) query.flip(coefficient_index(theta, server - 1, server_count));
  return query;
}

ClientQueries client_queries(std::size_t theta, std::size_t message_count,
                             std::size_t server_count, std::uint64_t seed) {
  if (server_count < 2 || server_count > 255) {
    fail(ErrorCode::kDomainError, "server count must lie in [2, 255]");
  }
  if (theta < 1 || theta > message_count) {
    fail(ErrorCode::kDomainError, "theta must lie in [1, mu]");
  }
  Rng rng(seed);
  ClientQueries out;
  out.mask = rng.bits(message_count * (server_count - 1));
  for (std::size_t n = 1; n <= server_count; ++n) {
    out.queries.push_back({static_cast<std::uint8_t>(n),
                           query_for_server(out.mask, theta, n, server_count)});
  }
  return out;
}

ChunkedMessages chunk_codewords(std::span<const BitVector> codewords, std::size_t server_count) {
  if (server_count < 2) fail(ErrorCode::kDomainError, "chunking needs N >= 2");
  if (codewords.empty()) fail(ErrorCode::kLayoutMismatch, "no codewords to chunk");
  ChunkedMessages out;
  out.server_count = server_count;
  out.codeword_bits = codewords.front().size();
  out.chunk_bits = (out.codeword_bits + server_count - 2) / (server_count - 1);
  for (const auto& codeword : codewords) {
    if (codeword.size() != out.codeword_bits) {
      fail(ErrorCode::kLayoutMismatch, "codewords differ in length");
    }
    std::vector<BitVector> chunks;
    for (std::size_t j = 0; j + 1 < server_count; ++j) {
      chunks.push_back(codeword.slice(j * out.chunk_bits, out.chunk_bits));
    }
    out.chunks.push_back(std::move(chunks));
  }
  return out;
}

Answer server_answer(const Query& query, const ChunkedMessages& messages) {
  const std::size_t per_message = messages.server_count - 1;
  if (query.coefficients.size() != messages.chunks.size() * per_message) {
    fail(ErrorCode::kLayoutMismatch, "query length does not match mu (N-1)");
  }
  Answer answer{query.server_id, BitVector(messages.chunk_bits)};
  for (std::size_t m = 0; m < messages.chunks.size(); ++m) {
    for (std::size_t j = 0; j < per_message; ++j) {
      if (query.coefficients.get(m * per_message + j)) answer.payload ^= messages.chunks[m][j];
    }
  }
  return answer;
}

std::optional<MessageBits> client_decode(std::span<const Answer> answers, std::size_t theta,
                                         const TypicalSetCodec& codec) {
  if (answers.size() < 2) fail(ErrorCode::kLengthMismatch, "need answers from N >= 2 servers");
  const std::size_t chunk_bits = answers.front().payload.size();
  for (const auto& a : answers) {
    if (a.payload.size() != chunk_bits) fail(ErrorCode::kLengthMismatch, "answer lengths differ");
  }
  const std::size_t total_bits = codec.params().total_bits;
  if (chunk_bits * (answers.size() - 1) < total_bits) {
    fail(ErrorCode::kLengthMismatch, "answers too short for the codeword");
  }

  BitVector codeword(total_bits);
  for (std::size_t j = 1; j < answers.size(); ++j) {
    const BitVector chunk = answers[j].payload ^ answers[0].payload;
    const std::size_t offset = (j - 1) * chunk_bits;
    if (offset >= total_bits) break;
    // Padding past B in the last chunk is dropped here.
    codeword.assign(offset, chunk.slice(0, std::min(chunk_bits, total_bits - offset)));
  }
  auto decoded = codec.decode(codeword);
  if (!decoded) return std::nullopt;
  return MessageBits{theta, std::move(*decoded)};
}

namespace {

void check_balanced(const PatternFamily& family) {
  const std::size_t size = family.pattern(1).size();
  for (const auto& set : family.sets()) {
    if (set.size() != size) fail(ErrorCode::kNotBalanced, "patterns differ in size");
  }
}

double family_p(const PatternFamily& family) {
  return static_cast<double>(family.pattern(1).size()) /
         static_cast<double>(family.alphabet_size());
}

SessionTranscript session_with_codec(const PatternFamily& family, std::size_t server_count,
                                     std::size_t message_length, std::size_t theta,
                                     SessionSeeds seeds, const TypicalSetCodec& codec) {
  if (theta < 1 || theta > family.size()) fail(ErrorCode::kDomainError, "theta out of range");

  const Dataset dataset = generate_dataset(family.alphabet_size(), message_length, seeds.dataset);
  const auto messages = derive_messages(dataset, family);

  std::vector<BitVector> codewords;
  codewords.reserve(messages.size());
  bool atypical = false;
  for (const auto& message : messages) {
    auto encoded = codec.encode(message.bits);
    if (message.index == theta) atypical = encoded.atypical;
    codewords.push_back(std::move(encoded.codeword));
  }
  const ChunkedMessages stored = chunk_codewords(codewords, server_count);

  const ClientQueries client = client_queries(theta, family.size(), server_count, seeds.query);
  std::vector<Answer> answers;
  answers.reserve(server_count);
  for (const auto& query : client.queries) answers.push_back(server_answer(query, stored));

  SessionTranscript transcript;
  transcript.theta = theta;
  transcript.server_count = server_count;
  transcript.message_length = message_length;
  transcript.queries = client.queries;
  for (const auto& answer : answers) {
    transcript.answer_bits.push_back(answer.payload.size());
    transcript.download_bits += answer.payload.size();
  }
  transcript.atypical = atypical;
  transcript.decoded = client_decode(answers, theta, codec);
  transcript.success = transcript.decoded && transcript.decoded->bits == messages[theta - 1].bits;
  transcript.measured_rate = static_cast<double>(message_length) *
                             binary_entropy(family_p(family)) /
                             static_cast<double>(transcript.download_bits);
  return transcript;
}

}  // namespace

SessionTranscript run_session(const PatternFamily& family, std::size_t server_count,
                              std::size_t message_length, std::size_t theta, SessionSeeds seeds,
                              double codec_target) {
  check_balanced(family);
  const TypicalSetCodec codec(design_codec(family_p(family), message_length, codec_target));
  return session_with_codec(family, server_count, message_length, theta, seeds, codec);
}

RateReport rate_experiment(const PatternFamily& family, std::size_t server_count,
                           std::size_t message_length, std::size_t trials, std::uint64_t seed,
                           double codec_target) {
  check_balanced(family);
  if (trials == 0) fail(ErrorCode::kDomainError, "need at least one trial");
  const TypicalSetCodec codec(design_codec(family_p(family), message_length, codec_target));

  struct Partial {
    std::size_t failures = 0;
    std::size_t atypical = 0;
    CompensatedSum rate_sum;
    std::size_t download_bits = 0;
  };
  const std::size_t workers =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, trials);
  std::vector<Partial> partials(workers);
  auto work = [&](std::size_t w) {
    for (std::size_t t = w; t < trials; t += workers) {
      const std::size_t theta = 1 + t % family.size();
      const SessionSeeds seeds{derive_seed(seed, 0, t), derive_seed(seed, 1, t)};
      const auto transcript =
          session_with_codec(family, server_count, message_length, theta, seeds, codec);
      partials[w].failures += transcript.success ? 0 : 1;
      partials[w].atypical += transcript.atypical ? 1 : 0;
      partials[w].rate_sum.add(transcript.measured_rate);
      partials[w].download_bits = transcript.download_bits;
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }

  RateReport report;
  report.trials = trials;
  CompensatedSum rate_sum;
  for (const auto& p : partials) {
    report.failures += p.failures;
    report.atypical_sessions += p.atypical;
    rate_sum.add(p.rate_sum.value());
    report.download_bits = std::max(report.download_bits, p.download_bits);
  }
  report.empirical_error = static_cast<double>(report.failures) / static_cast<double>(trials);
  report.mean_measured_rate = rate_sum.value() / static_cast<double>(trials);

  const PatternFamilyModel model(family);
  report.achievable_rate = achievable_rate(model, server_count);
  const auto strategy = family.size() <= kMaxExhaustiveMessages ? SearchStrategy::kExhaustive
                                                                : SearchStrategy::kGreedy;
  const ConverseReport converse = best_sequence(model, server_count, strategy);
  report.converse_rate_bound = model.min_entropy() / converse.per_record_bound;
  report.converse_strategy = converse.strategy;
  report.codec = codec.params();
  return report;
}

SessionTranscript baseline_download_all(const PatternFamily& family, std::size_t server_count,
                                        std::size_t message_length, std::size_t theta,
                                        std::uint64_t seed) {
  check_balanced(family);
  if (server_count < 2) fail(ErrorCode::kDomainError, "baseline needs N >= 2");
  if (theta < 1 || theta > family.size()) fail(ErrorCode::kDomainError, "theta out of range");
  const Dataset dataset = generate_dataset(family.alphabet_size(), message_length, seed);
  const std::size_t record_bits =
      static_cast<std::size_t>(std::bit_width(family.alphabet_size() - 1));

  // Server 1 ships every record; the others send nothing.
  BitVector wire(message_length * record_bits);
  for (std::size_t l = 0; l < message_length; ++l) {
    const std::uint32_t value = dataset.records[l] - 1;
    for (std::size_t b = 0; b < record_bits; ++b) {
      if ((value >> b) & 1U) wire.set(l * record_bits + b, true);
    }
  }
  Dataset received{family.alphabet_size(), std::vector<std::uint32_t>(message_length), seed};
  for (std::size_t l = 0; l < message_length; ++l) {
    std::uint32_t value = 0;
    for (std::size_t b = 0; b < record_bits; ++b) {
      if (wire.get(l * record_bits + b)) value |= 1U << b;
    }
    received.records[l] = value + 1;
  }

  SessionTranscript transcript;
  transcript.theta = theta;
  transcript.server_count = server_count;
  transcript.message_length = message_length;
  transcript.answer_bits.assign(server_count, 0);
  transcript.answer_bits[0] = wire.size();
  transcript.download_bits = wire.size();
  transcript.decoded = derive_message(received, family.pattern(theta), theta);
  transcript.success =
      transcript.decoded->bits == derive_message(dataset, family.pattern(theta), theta).bits;
  transcript.measured_rate = static_cast<double>(message_length) *
                             binary_entropy(family_p(family)) /
                             static_cast<double>(transcript.download_bits);
  return transcript;
}

}  // namespace privsearch
