#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace privsearch {

// Pattern indices (message indices) and alphabet values are 1-based
// throughout the public API, matching the usual [K] / [mu] labelling.

using Pattern = std::vector<std::uint32_t>;
// Membership bit per ordered pattern, 0 or 1.
using Signature = std::vector<std::uint8_t>;

struct BuildOptions {
  bool allow_duplicate_patterns = false;
};

// Alphabet size K plus mu search sets over [K]. Immutable once built; use
// build_family() or load_family() to obtain one.
class PatternFamily {
 public:
  std::uint32_t alphabet_size() const noexcept { return alphabet_size_; }
  std::size_t size() const noexcept { return sets_.size(); }
  const std::vector<Pattern>& sets() const noexcept { return sets_; }
  const Pattern& pattern(std::size_t index) const { return sets_.at(index - 1); }
  const std::string& label() const noexcept { return label_; }

  bool contains(std::size_t index, std::uint32_t value) const;

  friend bool operator==(const PatternFamily&, const PatternFamily&) = default;

 private:
  friend PatternFamily build_family(std::uint32_t, std::vector<Pattern>, std::string,
                                    BuildOptions);
  PatternFamily() = default;

  std::uint32_t alphabet_size_ = 0;
  std::vector<Pattern> sets_;
  std::string label_;
};

// Validates and canonicalizes (sorts each set). Errors: DomainError (K or mu
// zero), EmptySet, IndexOutOfRange, DuplicateIndexInSet, DuplicatePattern.
PatternFamily build_family(std::uint32_t alphabet_size, std::vector<Pattern> sets,
                           std::string label, BuildOptions options = {});

struct AtomCell {
  Signature signature;
  std::uint64_t size = 0;
};

struct AtomPartition {
  std::vector<std::size_t> ordered_indices;
  // Ordered by smallest alphabet value in each cell.
  std::vector<AtomCell> cells;
};

// Incremental Venn-cell refinement of the alphabet. Each add() splits every
// current cell in one pass over the alphabet, so t patterns cost O(K t).
class AtomRefiner {
 public:
  explicit AtomRefiner(const PatternFamily& family);

  void add(std::size_t index);

  std::size_t depth() const noexcept { return indices_.size(); }
  const std::vector<std::size_t>& indices() const noexcept { return indices_; }
  std::size_t cell_count() const noexcept { return sizes_.size(); }
  const std::vector<std::uint64_t>& cell_sizes() const noexcept { return sizes_; }
  const std::vector<Signature>& signatures() const noexcept { return signatures_; }

  AtomPartition partition() const;
  // Alphabet values of each cell, ascending, cells in partition() order.
  std::vector<std::vector<std::uint32_t>> members() const;

 private:
  const PatternFamily* family_;
  std::vector<std::size_t> indices_;
  std::vector<std::uint32_t> cell_of_;  // per alphabet value (0-based)
  std::vector<std::uint64_t> sizes_;
  std::vector<Signature> signatures_;
};

// Errors: BadIndexList when indices repeat or fall outside [1, mu].
AtomPartition atoms(const PatternFamily& family, std::span<const std::size_t> indices);

// Exact joint law of the indicator bits (w_{i1}, ..., w_{it}) of one record.
// Masses are counts over the common denominator K; zero-mass signatures are
// not stored.
class JointBitDistribution {
 public:
  JointBitDistribution(std::size_t arity, std::uint64_t denominator,
                       std::vector<std::pair<Signature, std::uint64_t>> masses);

  std::size_t arity() const noexcept { return arity_; }
  std::uint64_t denominator() const noexcept { return denominator_; }
  // Sorted by signature.
  const std::vector<std::pair<Signature, std::uint64_t>>& masses() const noexcept {
    return masses_;
  }

  // Numerator of the mass at sig (0 if absent).
  std::uint64_t count(const Signature& sig) const;
  double probability(const Signature& sig) const {
    return static_cast<double>(count(sig)) / static_cast<double>(denominator_);
  }

  // Law of the listed coordinates (0-based, in the given order).
  JointBitDistribution marginal(std::span<const std::size_t> coordinates) const;
  JointBitDistribution prefix(std::size_t length) const;

  friend bool operator==(const JointBitDistribution&, const JointBitDistribution&) = default;

 private:
  std::size_t arity_;
  std::uint64_t denominator_;
  std::vector<std::pair<Signature, std::uint64_t>> masses_;
};

JointBitDistribution joint_distribution(const PatternFamily& family,
                                        std::span<const std::size_t> indices);

// {"K": <int>, "label": <string>, "sets": [[...], ...]}
std::string save_family(const PatternFamily& family);
PatternFamily load_family(const std::string& document, BuildOptions options = {});

}  // namespace privsearch
