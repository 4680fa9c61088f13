#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "privsearch/patterns.hpp"

namespace privsearch {

// All quantities in bits.

// H2(p) with H2(0) = H2(1) = 0. DomainError outside [0, 1].
double binary_entropy(double p);

// Entropy of the law {count_i / total}; zero counts are skipped.
double entropy_of_counts(std::span<const std::uint64_t> counts, std::uint64_t total);

double entropy(const JointBitDistribution& dist);

// The first condition_count coordinates condition; the rest are the target.
struct EntropySplit {
  std::size_t condition_count = 0;
};

// H(target | condition). BadSplit unless condition_count < arity.
double conditional_entropy(const JointBitDistribution& dist, EntropySplit split);

// I(target ; condition) = H(target) - H(target | condition).
double mutual_information(const JointBitDistribution& dist, EntropySplit split);

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept;
  double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

}  // namespace privsearch
