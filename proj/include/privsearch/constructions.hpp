#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "privsearch/patterns.hpp"

namespace privsearch {

// K singleton patterns {1}, ..., {K}. DomainError for K < 2.
PatternFamily exact_search_family(std::uint32_t alphabet_size);

// K/M disjoint blocks {1..M}, {M+1..2M}, ... NotDivisible unless M | K.
PatternFamily disjoint_subfamily(std::uint32_t alphabet_size, std::uint32_t set_size);

// Largest depth accepted by nested_gamma_subfamily:
// max(2, floor(log_{1/gamma} sqrt(K))) with gamma = M/K.
std::size_t nested_depth_limit(std::uint32_t alphabet_size, std::uint32_t set_size);

// S_1 = {1..M}. Each later S_l takes floor(M |c| / K) of the lowest values of
// every Venn cell c of S_1..S_{l-1}; the remainder up to M comes from the cell
// outside all earlier patterns, then from the largest leftover cell.
// Errors: DomainError (needs 1 <= M <= K/2, depth >= 1), DepthTooLarge.
PatternFamily nested_gamma_subfamily(std::uint32_t alphabet_size, std::uint32_t set_size,
                                     std::size_t depth);

struct NestedLowerBound {
  double bits = 0.0;
  // True when some H2 argument had to be clamped into [0, 1].
  bool clamped = false;
};

// Lower bound on H(w_l | w_1..w_{l-1}) for the nested construction: a sum over
// the 2^{l-1} cells indexed by i, with m_i = popcount(i - 1), of
//   H2((g^{l-m+1}(1-g)^m K - l + 1) / (g^{l-m}(1-g)^m K + l - 1)) * P_i
// where P_i = max(0, g^{l-1-m}(1-g)^m K - (l - 1)) / K is the smallest
// possible probability of that cell.
NestedLowerBound nested_conditional_lower_bound(std::uint32_t alphabet_size,
                                                std::uint32_t set_size, std::size_t level);

// mu = K arcs S_k = {k+1, ..., k+K/2} with wrap-around on the circle [K].
// OddK for odd K; DomainError for K < 4.
PatternFamily circular_family(std::uint32_t alphabet_size);

struct TripleEntry {
  std::size_t k1 = 0;
  std::size_t k2 = 0;
  std::size_t k3 = 0;
  double second_given_first = 0.0;           // H(w_k2 | w_k1)
  double third_given_first_two = 0.0;        // H(w_k3 | w_k1, w_k2)
};

struct Prop5ScanReport {
  std::uint32_t alphabet_size = 0;
  bool used_rotation_symmetry = true;
  std::vector<TripleEntry> table;
  // max over ordered triples of min(second_given_first, third_given_first_two)
  double max_min = 0.0;
  TripleEntry argmax;
  // Best third arc once the second arc sits a quarter turn from the first.
  TripleEntry quarter_turn_witness;
};

// Exhaustive scan over ordered triples of distinct arcs of circular_family(K).
// With use_rotation_symmetry the first arc is fixed to 1. Ties in max_min go
// to the lexicographically smallest triple. Errors: OddK, DomainError (K < 8).
Prop5ScanReport prop5_triple_scan(std::uint32_t alphabet_size, bool use_rotation_symmetry = true,
                                  bool keep_table = false);

// H2(1/K) - (1 - l/K) H2(1/(K-l)), for 1 <= l < K.
double exact_mi_closed_form(std::uint32_t alphabet_size, std::uint32_t level);

}  // namespace privsearch
