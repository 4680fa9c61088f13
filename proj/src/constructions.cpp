#include "privsearch/constructions.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "privsearch/error.hpp"
#include "privsearch/infotheory.hpp"

namespace privsearch {

PatternFamily exact_search_family(std::uint32_t alphabet_size) {
  if (alphabet_size < 2) fail(ErrorCode::kDomainError, "exact search needs K >= 2");
  std::vector<Pattern> sets;
  sets.reserve(alphabet_size);
  for (std::uint32_t k = 1; k <= alphabet_size; ++k) sets.push_back({k});
  return build_family(alphabet_size, std::move(sets), "exact-K" + std::to_string(alphabet_size));
}

PatternFamily disjoint_subfamily(std::uint32_t alphabet_size, std::uint32_t set_size) {
  if (set_size < 1 || alphabet_size < 1) fail(ErrorCode::kDomainError, "need K >= 1 and M >= 1");
  if (alphabet_size % set_size != 0) {
    fail(ErrorCode::kNotDivisible, "M = " + std::to_string(set_size) +
                                       " does not divide K = " + std::to_string(alphabet_size));
  }
  std::vector<Pattern> sets;
  for (std::uint32_t start = 1; start <= alphabet_size; start += set_size) {
    Pattern set(set_size);
    for (std::uint32_t i = 0; i < set_size; ++i) set[i] = start + i;
    sets.push_back(std::move(set));
  }
  return build_family(alphabet_size, std::move(sets),
                      "disjoint-K" + std::to_string(alphabet_size) + "-M" +
                          std::to_string(set_size));
}

namespace {

void check_nested(std::uint32_t alphabet_size, std::uint32_t set_size) {
  if (set_size < 1 || 2ULL * set_size > alphabet_size) {
    fail(ErrorCode::kDomainError, "nested construction needs 1 <= M <= K/2");
  }
}

}  // namespace

std::size_t nested_depth_limit(std::uint32_t alphabet_size, std::uint32_t set_size) {
  check_nested(alphabet_size, set_size);
  const double gamma = static_cast<double>(set_size) / static_cast<double>(alphabet_size);
  const double levels = std::log(std::sqrt(static_cast<double>(alphabet_size))) /
                        std::log(1.0 / gamma);
  return std::max<std::size_t>(2, static_cast<std::size_t>(std::floor(levels + 1e-9)));
}

PatternFamily nested_gamma_subfamily(std::uint32_t alphabet_size, std::uint32_t set_size,
                                     std::size_t depth) {
  check_nested(alphabet_size, set_size);
  if (depth < 1) fail(ErrorCode::kDomainError, "depth must be >= 1");
  const std::size_t limit = nested_depth_limit(alphabet_size, set_size);
  if (depth > limit) {
    fail(ErrorCode::kDepthTooLarge, "depth " + std::to_string(depth) + " exceeds limit " +
                                        std::to_string(limit) + " for K = " +
                                        std::to_string(alphabet_size) + ", M = " +
                                        std::to_string(set_size));
  }

  std::vector<Pattern> sets;
  Pattern first(set_size);
  for (std::uint32_t i = 0; i < set_size; ++i) first[i] = i + 1;
  sets.push_back(std::move(first));

  for (std::size_t level = 2; level <= depth; ++level) {
    const PatternFamily partial = build_family(alphabet_size, sets, "partial");
    AtomRefiner refiner(partial);
    for (std::size_t index = 1; index <= partial.size(); ++index) refiner.add(index);
    const auto cells = refiner.members();
    const auto& signatures = refiner.signatures();

    Pattern next;
    next.reserve(set_size);
    std::vector<std::size_t> taken(cells.size(), 0);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      taken[c] = static_cast<std::size_t>(static_cast<std::uint64_t>(set_size) * cells[c].size() /
                                          alphabet_size);
      next.insert(next.end(), cells[c].begin(), cells[c].begin() + taken[c]);
    }

    auto draw = [&](std::size_t c, std::size_t count) {
      next.insert(next.end(), cells[c].begin() + taken[c], cells[c].begin() + taken[c] + count);
      taken[c] += count;
    };

    std::size_t shortfall = set_size - next.size();
    for (std::size_t c = 0; c < cells.size() && shortfall > 0; ++c) {
      if (std::all_of(signatures[c].begin(), signatures[c].end(), [](auto b) { return b == 0; })) {
        const std::size_t count = std::min(shortfall, cells[c].size() - taken[c]);
        draw(c, count);
        shortfall -= count;
      }
    }
    while (shortfall > 0) {
      std::size_t pick = 0;
      for (std::size_t c = 1; c < cells.size(); ++c) {
        if (cells[c].size() - taken[c] > cells[pick].size() - taken[pick]) pick = c;
      }
      draw(pick, 1);
      --shortfall;
    }
    std::sort(next.begin(), next.end());
    sets.push_back(std::move(next));
  }

  return build_family(alphabet_size, std::move(sets),
                      "nested-K" + std::to_string(alphabet_size) + "-M" +
                          std::to_string(set_size) + "-d" + std::to_string(depth));
}

NestedLowerBound nested_conditional_lower_bound(std::uint32_t alphabet_size,
                                                std::uint32_t set_size, std::size_t level) {
  check_nested(alphabet_size, set_size);
  if (level < 2) fail(ErrorCode::kDomainError, "lower bound needs l >= 2");
  if (level > 40) fail(ErrorCode::kDomainError, "l too large for 2^{l-1} cell enumeration");

  const double k = static_cast<double>(alphabet_size);
  const double g = static_cast<double>(set_size) / k;
  const double l = static_cast<double>(level);
  const std::uint64_t cells = std::uint64_t{1} << (level - 1);

  NestedLowerBound out;
  CompensatedSum sum;
  for (std::uint64_t i = 0; i < cells; ++i) {
    const double m = static_cast<double>(std::popcount(i));
    const double ones = std::pow(1.0 - g, m);
    const double numerator = std::pow(g, l - m + 1.0) * ones * k - l + 1.0;
    const double denominator = std::pow(g, l - m) * ones * k + l - 1.0;
    double ratio = numerator / denominator;
    if (ratio < 0.0 || ratio > 1.0) {
      ratio = std::clamp(ratio, 0.0, 1.0);
      out.clamped = true;
    }
    const double weight = std::max(0.0, std::pow(g, l - 1.0 - m) * ones * k - (l - 1.0)) / k;
    sum.add(binary_entropy(ratio) * weight);
  }
  out.bits = sum.value();
  return out;
}

PatternFamily circular_family(std::uint32_t alphabet_size) {
  if (alphabet_size % 2 != 0) {
    fail(ErrorCode::kOddK, "circular family needs even K, got " + std::to_string(alphabet_size));
  }
  if (alphabet_size < 4) fail(ErrorCode::kDomainError, "circular family needs K >= 4");
  const std::uint32_t half = alphabet_size / 2;
  std::vector<Pattern> sets;
  sets.reserve(alphabet_size);
  for (std::uint32_t k = 1; k <= alphabet_size; ++k) {
    Pattern arc(half);
    for (std::uint32_t i = 1; i <= half; ++i) arc[i - 1] = (k + i - 1) % alphabet_size + 1;
    sets.push_back(std::move(arc));
  }
  return build_family(alphabet_size, std::move(sets),
                      "circular-K" + std::to_string(alphabet_size));
}

Prop5ScanReport prop5_triple_scan(std::uint32_t alphabet_size, bool use_rotation_symmetry,
                                  bool keep_table) {
  if (alphabet_size % 2 != 0) {
    fail(ErrorCode::kOddK, "scan needs even K, got " + std::to_string(alphabet_size));
  }
  if (alphabet_size < 8) fail(ErrorCode::kDomainError, "scan needs K >= 8");

  const PatternFamily family = circular_family(alphabet_size);
  const std::size_t mu = family.size();
  const std::size_t quarter = 1 + alphabet_size / 4;
  auto joint_entropy = [&](const AtomRefiner& r) {
    return entropy_of_counts(r.cell_sizes(), alphabet_size);
  };

  Prop5ScanReport report;
  report.alphabet_size = alphabet_size;
  report.used_rotation_symmetry = use_rotation_symmetry;
  report.max_min = -1.0;

  const std::size_t first_limit = use_rotation_symmetry ? 1 : mu;
  for (std::size_t k1 = 1; k1 <= first_limit; ++k1) {
    AtomRefiner one(family);
    one.add(k1);
    const double h1 = joint_entropy(one);
    for (std::size_t k2 = 1; k2 <= mu; ++k2) {
      if (k2 == k1) continue;
      AtomRefiner two = one;
      two.add(k2);
      const double h12 = joint_entropy(two);
      const double second = std::max(0.0, h12 - h1);
      for (std::size_t k3 = 1; k3 <= mu; ++k3) {
        if (k3 == k1 || k3 == k2) continue;
        AtomRefiner three = two;
        three.add(k3);
        const double third = std::max(0.0, joint_entropy(three) - h12);
        const TripleEntry entry{k1, k2, k3, second, third};
        if (keep_table) report.table.push_back(entry);

        const double value = std::min(second, third);
        if (value > report.max_min + 1e-12) {
          report.max_min = value;
          report.argmax = entry;
        }
        if (k1 == 1 && k2 == quarter &&
            (report.quarter_turn_witness.k1 == 0 ||
             third > report.quarter_turn_witness.third_given_first_two + 1e-12)) {
          report.quarter_turn_witness = entry;
        }
      }
    }
  }
  return report;
}

double exact_mi_closed_form(std::uint32_t alphabet_size, std::uint32_t level) {
  if (level < 1 || level >= alphabet_size) {
    fail(ErrorCode::kDomainError, "closed form needs 1 <= l < K");
  }
  const double k = static_cast<double>(alphabet_size);
  const double l = static_cast<double>(level);
  return binary_entropy(1.0 / k) - (1.0 - l / k) * binary_entropy(1.0 / (k - l));
}

}  // namespace privsearch
