#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <vector>

#include "privsearch/patterns.hpp"

namespace privsearch {

// Source of per-symbol (per-record) entropies for mu dependent messages.
class EntropyModel {
 public:
  virtual ~EntropyModel() = default;

  virtual std::size_t message_count() const = 0;
  // H(w_k), k in [1, mu].
  virtual double entropy(std::size_t k) const = 0;
  // H(w_k | w_prefix); prefix holds distinct indices different from k.
  virtual double conditional_entropy(std::size_t k, std::span<const std::size_t> prefix) const = 0;

  // H(w_{s_l} | w_{s_1..s_{l-1}}) for every l. Models with a cheaper chained
  // evaluation override this.
  virtual std::vector<double> chain_entropies(std::span<const std::size_t> sequence) const;

  double min_entropy() const;
  double max_entropy() const;
  bool balanced(double tolerance = 1e-9) const;
};

// Entropies of a pattern family's indicator messages. Conditional entropies
// are memoized per (index, prefix set); safe for concurrent queries.
class PatternFamilyModel final : public EntropyModel {
 public:
  explicit PatternFamilyModel(PatternFamily family);

  const PatternFamily& family() const noexcept { return family_; }

  std::size_t message_count() const override { return family_.size(); }
  double entropy(std::size_t k) const override;
  double conditional_entropy(std::size_t k, std::span<const std::size_t> prefix) const override;
  std::vector<double> chain_entropies(std::span<const std::size_t> sequence) const override;

 private:
  PatternFamily family_;
  std::vector<double> marginals_;
  mutable std::shared_mutex memo_mutex_;
  mutable std::map<std::vector<std::size_t>, double> memo_;  // key: k followed by sorted prefix
};

// mu mutually independent messages of per-symbol entropy h each.
class IndependentUniformModel final : public EntropyModel {
 public:
  IndependentUniformModel(std::size_t message_count, double entropy_bits);

  std::size_t message_count() const override { return count_; }
  double entropy(std::size_t k) const override;
  double conditional_entropy(std::size_t k, std::span<const std::size_t> prefix) const override;

 private:
  std::size_t count_;
  double h_;
};

struct ConverseReport {
  std::vector<std::size_t> sequence;
  std::size_t server_count = 0;
  double per_record_bound = 0.0;
  double normalized_bound = 0.0;
  double asymptote = 0.0;
  double gap = 0.0;
  std::string strategy = "given";
  // True when the sequence stops short of all mu messages.
  bool truncated = false;
};

// Sum over l of H(w_{s_l} | w_{s_1..s_{l-1}}) / N^{l-1}, normalized by the
// smallest entropy among all mu messages. Errors: BadSequence, NTooSmall,
// DomainError when every message has zero entropy.
ConverseReport converse_bound(const EntropyModel& model, std::size_t server_count,
                              std::span<const std::size_t> sequence);

enum class SearchStrategy { kExhaustive, kGreedy };

inline constexpr std::size_t kMaxExhaustiveMessages = 10;

// kExhaustive returns the lexicographically first maximizing ordering (exact,
// via dynamic programming over prefix sets); kGreedy adds the unused message
// with the largest conditional entropy, lowest index on ties.
ConverseReport best_sequence(const EntropyModel& model, std::size_t server_count,
                             SearchStrategy strategy,
                             std::optional<std::size_t> max_length = std::nullopt);

// (1 + 1/N + ... + 1/N^{mu-1})^{-1}
double pir_capacity(std::size_t message_count, std::size_t server_count);

// (1 - 1/N) H_min / H_max
double achievable_rate(const EntropyModel& model, std::size_t server_count);

// N / (N - 1)
double asymptote_reciprocal(std::size_t server_count);

// rho_l = I(w_{s_{l+1}} ; w_{s_1..s_l}) / H(w) for l = 1..horizon.
// Errors: NotBalanced, SequenceTooShort, BadSequence, DomainError if H(w) = 0.
std::vector<double> sufficient_condition_profile(const EntropyModel& model,
                                                 std::span<const std::size_t> sequence,
                                                 std::size_t horizon);

struct CurvePoint {
  std::uint32_t alphabet_size = 0;
  std::size_t server_count = 0;
  double normalized_bound = 0.0;
  double asymptote = 0.0;
};

// Normalized converse of exact search along the sequence 1..K for every
// K in [2, max_alphabet] and N in server_counts; rows ordered by K, then N.
std::vector<CurvePoint> figure1_curve(std::uint32_t max_alphabet,
                                      std::span<const std::size_t> server_counts);

}  // namespace privsearch
