#pragma once

// Slow, obviously-correct reference computations used only by the tests.
// None of these call into the library's entropy or refinement code.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "privsearch/patterns.hpp"

namespace oracle {

using Counts = std::map<std::vector<std::uint8_t>, std::uint64_t>;

inline long double h2(long double p) {
  if (p <= 0.0L || p >= 1.0L) return 0.0L;
  return -p * std::log2(p) - (1.0L - p) * std::log2(1.0L - p);
}

// Walk every alphabet value and record its membership signature.
inline Counts enumerate_joint(const privsearch::PatternFamily& family,
                              const std::vector<std::size_t>& indices) {
  Counts counts;
  for (std::uint32_t v = 1; v <= family.alphabet_size(); ++v) {
    std::vector<std::uint8_t> sig;
    for (std::size_t idx : indices) {
      const auto& set = family.sets()[idx - 1];
      sig.push_back(std::find(set.begin(), set.end(), v) != set.end() ? 1 : 0);
    }
    ++counts[sig];
  }
  return counts;
}

inline long double entropy(const Counts& counts, std::uint64_t total) {
  long double h = 0.0L;
  for (const auto& [sig, c] : counts) {
    const long double p = static_cast<long double>(c) / static_cast<long double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

inline long double joint_entropy(const privsearch::PatternFamily& family,
                                 const std::vector<std::size_t>& indices) {
  if (indices.empty()) return 0.0L;
  return entropy(enumerate_joint(family, indices), family.alphabet_size());
}

// H(w_k | w_prefix) as a difference of joint entropies.
inline long double conditional(const privsearch::PatternFamily& family, std::size_t k,
                               std::vector<std::size_t> prefix) {
  const long double base = joint_entropy(family, prefix);
  prefix.push_back(k);
  return joint_entropy(family, prefix) - base;
}

// Largest per-record converse sum over every ordering of all messages.
inline long double best_converse_by_permutation(const privsearch::PatternFamily& family,
                                                std::size_t n) {
  std::vector<std::size_t> order(family.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i + 1;
  long double best = -1.0L;
  do {
    long double sum = 0.0L;
    long double scale = 1.0L;
    std::vector<std::size_t> prefix;
    for (std::size_t k : order) {
      sum += conditional(family, k, prefix) / scale;
      prefix.push_back(k);
      scale *= static_cast<long double>(n);
    }
    best = std::max(best, sum);
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

// Exact-search converse along 1..K in closed form, normalized by H2(1/K).
inline long double figure_closed_form(std::uint32_t k, std::size_t n) {
  long double sum = 0.0L;
  long double scale = 1.0L;
  for (std::uint32_t l = 1; l <= k; ++l) {
    const long double remaining = static_cast<long double>(k - l + 1);
    sum += remaining / k * h2(1.0L / remaining) / scale;
    scale *= static_cast<long double>(n);
  }
  return sum / h2(1.0L / k);
}

// Every length-n block whose weight lies in [lo, hi], ordered by weight and
// then lexicographically with bit 0 leading and 0 before 1.
inline std::vector<std::vector<std::uint8_t>> window_sequences(std::size_t n, std::size_t lo,
                                                               std::size_t hi) {
  std::vector<std::vector<std::uint8_t>> out;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
    std::vector<std::uint8_t> seq(n);
    std::size_t w = 0;
    for (std::size_t i = 0; i < n; ++i) {
      seq[i] = (x >> i) & 1U;
      w += seq[i];
    }
    if (w >= lo && w <= hi) out.push_back(std::move(seq));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    const auto wa = std::count(a.begin(), a.end(), 1);
    const auto wb = std::count(b.begin(), b.end(), 1);
    if (wa != wb) return wa < wb;
    return a < b;
  });
  return out;
}

}  // namespace oracle
