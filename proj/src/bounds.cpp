#include "privsearch/bounds.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>

#include "privsearch/constructions.hpp"
#include "privsearch/error.hpp"
#include "privsearch/infotheory.hpp"

namespace privsearch {

namespace {

constexpr double kTieTolerance = 1e-12;

void check_servers(std::size_t server_count) {
  if (server_count < 2) {
    fail(ErrorCode::kNTooSmall, "server count N must be >= 2, got " + std::to_string(server_count));
  }
}

void check_sequence(std::size_t message_count, std::span<const std::size_t> sequence) {
  if (sequence.empty()) fail(ErrorCode::kBadSequence, "sequence is empty");
  std::vector<bool> used(message_count + 1, false);
  for (std::size_t k : sequence) {
    if (k < 1 || k > message_count) {
      fail(ErrorCode::kBadSequence, "message index " + std::to_string(k) + " outside [1, " +
                                        std::to_string(message_count) + "]");
    }
    if (used[k]) fail(ErrorCode::kBadSequence, "message index " + std::to_string(k) + " repeated");
    used[k] = true;
  }
}

double geometric_weighted_sum(std::span<const double> terms, std::size_t server_count) {
  CompensatedSum sum;
  double weight = 1.0;
  for (double term : terms) {
    sum.add(term * weight);
    weight /= static_cast<double>(server_count);
  }
  return sum.value();
}

}  // namespace

std::vector<double> EntropyModel::chain_entropies(std::span<const std::size_t> sequence) const {
  std::vector<double> out;
  out.reserve(sequence.size());
  for (std::size_t l = 0; l < sequence.size(); ++l) {
    out.push_back(conditional_entropy(sequence[l], sequence.first(l)));
  }
  return out;
}

double EntropyModel::min_entropy() const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k <= message_count(); ++k) best = std::min(best, entropy(k));
  return best;
}

double EntropyModel::max_entropy() const {
  double best = 0.0;
  for (std::size_t k = 1; k <= message_count(); ++k) best = std::max(best, entropy(k));
  return best;
}

bool EntropyModel::balanced(double tolerance) const {
  return max_entropy() - min_entropy() <= tolerance;
}

PatternFamilyModel::PatternFamilyModel(PatternFamily family) : family_(std::move(family)) {
  marginals_.reserve(family_.size());
  for (const Pattern& set : family_.sets()) {
    marginals_.push_back(binary_entropy(static_cast<double>(set.size()) /
                                        static_cast<double>(family_.alphabet_size())));
  }
}

double PatternFamilyModel::entropy(std::size_t k) const {
  if (k < 1 || k > marginals_.size()) {
    fail(ErrorCode::kBadIndexList, "message index " + std::to_string(k) + " out of range");
  }
  return marginals_[k - 1];
}

double PatternFamilyModel::conditional_entropy(std::size_t k,
                                               std::span<const std::size_t> prefix) const {
  if (prefix.empty()) return entropy(k);

  std::vector<std::size_t> key;
  key.reserve(prefix.size() + 1);
  key.push_back(k);
  key.insert(key.end(), prefix.begin(), prefix.end());
  std::sort(key.begin() + 1, key.end());
  {
    std::shared_lock lock(memo_mutex_);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  }

  AtomRefiner refiner(family_);
  for (std::size_t index : prefix) refiner.add(index);
  const double before = entropy_of_counts(refiner.cell_sizes(), family_.alphabet_size());
  refiner.add(k);
  const double after = entropy_of_counts(refiner.cell_sizes(), family_.alphabet_size());
  const double value = std::clamp(after - before, 0.0, entropy(k));

  std::unique_lock lock(memo_mutex_);
  memo_.emplace(std::move(key), value);
  return value;
}

std::vector<double> PatternFamilyModel::chain_entropies(
    std::span<const std::size_t> sequence) const {
  std::vector<double> out;
  out.reserve(sequence.size());
  AtomRefiner refiner(family_);
  double previous = 0.0;
  for (std::size_t k : sequence) {
    refiner.add(k);
    const double joint = entropy_of_counts(refiner.cell_sizes(), family_.alphabet_size());
    out.push_back(std::clamp(joint - previous, 0.0, entropy(k)));
    previous = joint;
  }
  return out;
}

IndependentUniformModel::IndependentUniformModel(std::size_t message_count, double entropy_bits)
    : count_(message_count), h_(entropy_bits) {
  if (message_count == 0) fail(ErrorCode::kDomainError, "model needs at least one message");
  if (!(entropy_bits >= 0.0)) fail(ErrorCode::kDomainError, "entropy must be nonnegative");
}

double IndependentUniformModel::entropy(std::size_t k) const {
  if (k < 1 || k > count_) {
    fail(ErrorCode::kBadIndexList, "message index " + std::to_string(k) + " out of range");
  }
  return h_;
}

double IndependentUniformModel::conditional_entropy(std::size_t k,
                                                    std::span<const std::size_t>) const {
  return entropy(k);
}

ConverseReport converse_bound(const EntropyModel& model, std::size_t server_count,
                              std::span<const std::size_t> sequence) {
  check_servers(server_count);
  check_sequence(model.message_count(), sequence);

  const double h_min = model.min_entropy();
  if (!(h_min > 0.0)) {
    fail(ErrorCode::kDomainError, "smallest message entropy is zero; normalization undefined");
  }

  ConverseReport report;
  report.sequence.assign(sequence.begin(), sequence.end());
  report.server_count = server_count;
  report.per_record_bound = geometric_weighted_sum(model.chain_entropies(sequence), server_count);
  report.normalized_bound = report.per_record_bound / h_min;
  report.asymptote = asymptote_reciprocal(server_count);
  report.gap = report.asymptote - report.normalized_bound;
  report.truncated = sequence.size() < model.message_count();
  return report;
}

namespace {

std::vector<std::size_t> exhaustive_order(const EntropyModel& model, std::size_t server_count,
                                          std::size_t depth) {
  const std::size_t mu = model.message_count();
  const std::size_t states = std::size_t{1} << mu;
  const double n = static_cast<double>(server_count);

  // best[S]: largest achievable sum of the remaining terms once the messages
  // in S (any order) occupy the first |S| positions.
  std::vector<double> best(states, 0.0);
  std::vector<std::vector<double>> gain(states);

  std::vector<std::size_t> by_size(states);
  std::iota(by_size.begin(), by_size.end(), 0);
  std::stable_sort(by_size.begin(), by_size.end(), [](std::size_t a, std::size_t b) {
    return std::popcount(a) > std::popcount(b);
  });

  for (std::size_t s : by_size) {
    const auto used = static_cast<std::size_t>(std::popcount(s));
    if (used >= depth) continue;
    std::vector<std::size_t> prefix;
    for (std::size_t k = 0; k < mu; ++k) {
      if (s & (std::size_t{1} << k)) prefix.push_back(k + 1);
    }
    const double weight = std::pow(n, -static_cast<double>(used));
    gain[s].assign(mu, -1.0);
    double top = -1.0;
    for (std::size_t k = 0; k < mu; ++k) {
      if (s & (std::size_t{1} << k)) continue;
      const double value =
          model.conditional_entropy(k + 1, prefix) * weight + best[s | (std::size_t{1} << k)];
      gain[s][k] = value;
      top = std::max(top, value);
    }
    best[s] = top;
  }

  std::vector<std::size_t> order;
  std::size_t s = 0;
  while (order.size() < depth) {
    const double target = best[s];
    const double tolerance = kTieTolerance * std::max(1.0, std::abs(target));
    for (std::size_t k = 0; k < mu; ++k) {
      if (gain[s][k] >= 0.0 && gain[s][k] >= target - tolerance) {
        order.push_back(k + 1);
        s |= std::size_t{1} << k;
        break;
      }
    }
  }
  return order;
}

std::vector<std::size_t> greedy_order(const EntropyModel& model, std::size_t depth) {
  const std::size_t mu = model.message_count();
  std::vector<std::size_t> order;
  std::vector<bool> used(mu + 1, false);
  while (order.size() < depth) {
    std::size_t pick = 0;
    double top = -1.0;
    for (std::size_t k = 1; k <= mu; ++k) {
      if (used[k]) continue;
      const double value = model.conditional_entropy(k, order);
      if (value > top + kTieTolerance) {
        top = value;
        pick = k;
      }
    }
    used[pick] = true;
    order.push_back(pick);
  }
  return order;
}

}  // namespace

ConverseReport best_sequence(const EntropyModel& model, std::size_t server_count,
                             SearchStrategy strategy, std::optional<std::size_t> max_length) {
  check_servers(server_count);
  const std::size_t mu = model.message_count();
  std::size_t depth = mu;
  if (max_length) {
    if (*max_length == 0) fail(ErrorCode::kBadSequence, "max_len must be >= 1");
    depth = std::min(depth, *max_length);
  }

  std::vector<std::size_t> order;
  if (strategy == SearchStrategy::kExhaustive) {
    if (mu > kMaxExhaustiveMessages) {
      fail(ErrorCode::kTooManyMessagesForExhaustive,
           "exhaustive search supports at most " + std::to_string(kMaxExhaustiveMessages) +
               " messages, family has " + std::to_string(mu));
    }
    order = exhaustive_order(model, server_count, depth);
  } else {
    order = greedy_order(model, depth);
  }

  ConverseReport report = converse_bound(model, server_count, order);
  report.strategy = strategy == SearchStrategy::kExhaustive ? "exhaustive" : "greedy";
  return report;
}

double pir_capacity(std::size_t message_count, std::size_t server_count) {
  if (message_count < 1) fail(ErrorCode::kDomainError, "PIR capacity needs mu >= 1");
  if (server_count < 2) fail(ErrorCode::kDomainError, "PIR capacity needs N >= 2");
  std::vector<double> ones(message_count, 1.0);
  return 1.0 / geometric_weighted_sum(ones, server_count);
}

double achievable_rate(const EntropyModel& model, std::size_t server_count) {
  if (server_count < 2) fail(ErrorCode::kDomainError, "achievable rate needs N >= 2");
  if (model.message_count() == 0) fail(ErrorCode::kDomainError, "model has no messages");
  const double h_max = model.max_entropy();
  if (!(h_max > 0.0)) fail(ErrorCode::kDomainError, "every message is deterministic (H_max = 0)");
  const double n = static_cast<double>(server_count);
  return (1.0 - 1.0 / n) * model.min_entropy() / h_max;
}

double asymptote_reciprocal(std::size_t server_count) {
  if (server_count < 2) fail(ErrorCode::kDomainError, "asymptote needs N >= 2");
  const double n = static_cast<double>(server_count);
  return n / (n - 1.0);
}

std::vector<double> sufficient_condition_profile(const EntropyModel& model,
                                                 std::span<const std::size_t> sequence,
                                                 std::size_t horizon) {
  if (!model.balanced()) fail(ErrorCode::kNotBalanced, "model is not balanced");
  if (sequence.size() < horizon + 1) {
    fail(ErrorCode::kSequenceTooShort, "sequence needs at least horizon + 1 = " +
                                           std::to_string(horizon + 1) + " entries");
  }
  check_sequence(model.message_count(), sequence);
  const double h = model.entropy(sequence[0]);
  if (!(h > 0.0)) fail(ErrorCode::kDomainError, "message entropy is zero");

  const auto chain = model.chain_entropies(sequence.first(horizon + 1));
  std::vector<double> rho;
  rho.reserve(horizon);
  for (std::size_t l = 1; l <= horizon; ++l) {
    const double info = std::max(0.0, model.entropy(sequence[l]) - chain[l]);
    rho.push_back(info / h);
  }
  return rho;
}

std::vector<CurvePoint> figure1_curve(std::uint32_t max_alphabet,
                                      std::span<const std::size_t> server_counts) {
  if (max_alphabet < 2) fail(ErrorCode::kDomainError, "K_max must be >= 2");
  if (server_counts.empty()) fail(ErrorCode::kDomainError, "need at least one server count");
  for (std::size_t n : server_counts) {
    if (n < 2) fail(ErrorCode::kDomainError, "server counts must be >= 2");
  }

  std::vector<CurvePoint> rows;
  rows.reserve((max_alphabet - 1) * server_counts.size());
  for (std::uint32_t k = 2; k <= max_alphabet; ++k) {
    const PatternFamilyModel model(exact_search_family(k));
    std::vector<std::size_t> sequence(k);
    std::iota(sequence.begin(), sequence.end(), 1);
    const auto chain = model.chain_entropies(sequence);
    const double h = model.min_entropy();
    for (std::size_t n : server_counts) {
      rows.push_back({k, n, geometric_weighted_sum(chain, n) / h, asymptote_reciprocal(n)});
    }
  }
  return rows;
}

}  // namespace privsearch
