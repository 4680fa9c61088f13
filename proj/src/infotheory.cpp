#include "privsearch/infotheory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "privsearch/error.hpp"

namespace privsearch {

void CompensatedSum::add(double x) noexcept {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    compensation_ += (sum_ - t) + x;
  } else {
    compensation_ += (x - t) + sum_;
  }
  sum_ = t;
}

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) fail(ErrorCode::kDomainError, "binary entropy needs p in [0, 1]");
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double entropy_of_counts(std::span<const std::uint64_t> counts, std::uint64_t total) {
  if (total == 0) fail(ErrorCode::kDomainError, "entropy of an empty law");
  const double denom = static_cast<double>(total);
  CompensatedSum sum;
  for (std::uint64_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / denom;
    sum.add(-p * std::log2(p));
  }
  return std::max(0.0, sum.value());
}

double entropy(const JointBitDistribution& dist) {
  std::vector<std::uint64_t> counts;
  counts.reserve(dist.masses().size());
  for (const auto& entry : dist.masses()) counts.push_back(entry.second);
  return entropy_of_counts(counts, dist.denominator());
}

namespace {

void check_split(const JointBitDistribution& dist, EntropySplit split) {
  if (split.condition_count >= dist.arity()) {
    fail(ErrorCode::kBadSplit, "split needs condition_count < arity (" +
                                   std::to_string(split.condition_count) + " vs " +
                                   std::to_string(dist.arity()) + ")");
  }
}

}  // namespace

double conditional_entropy(const JointBitDistribution& dist, EntropySplit split) {
  check_split(dist, split);
  const double joint = entropy(dist);
  if (split.condition_count == 0) return joint;
  const double condition = entropy(dist.prefix(split.condition_count));
  return std::max(0.0, joint - condition);
}

double mutual_information(const JointBitDistribution& dist, EntropySplit split) {
  check_split(dist, split);
  std::vector<std::size_t> target(dist.arity() - split.condition_count);
  std::iota(target.begin(), target.end(), split.condition_count);
  const double target_entropy = entropy(dist.marginal(target));
  return std::max(0.0, target_entropy - conditional_entropy(dist, split));
}

}  // namespace privsearch
