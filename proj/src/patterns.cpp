#include "privsearch/patterns.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>

#include "json.hpp"
#include "privsearch/error.hpp"

namespace privsearch {

bool PatternFamily::contains(std::size_t index, std::uint32_t value) const {
  const Pattern& set = pattern(index);
  return std::binary_search(set.begin(), set.end(), value);
}

PatternFamily build_family(std::uint32_t alphabet_size, std::vector<Pattern> sets,
                           std::string label, BuildOptions options) {
  if (alphabet_size == 0) fail(ErrorCode::kDomainError, "alphabet size K must be >= 1");
  if (sets.empty()) fail(ErrorCode::kDomainError, "family needs at least one pattern");

  for (std::size_t m = 0; m < sets.size(); ++m) {
    Pattern& set = sets[m];
    const std::string where = "pattern " + std::to_string(m + 1);
    if (set.empty()) fail(ErrorCode::kEmptySet, where + " is empty");
    std::sort(set.begin(), set.end());
    for (std::size_t i = 0; i < set.size(); ++i) {
      if (set[i] < 1 || set[i] > alphabet_size) {
        fail(ErrorCode::kIndexOutOfRange, where + " has index " + std::to_string(set[i]) +
                                              " outside [1, " + std::to_string(alphabet_size) +
                                              "]");
      }
      if (i > 0 && set[i] == set[i - 1]) {
        fail(ErrorCode::kDuplicateIndexInSet,
             where + " repeats index " + std::to_string(set[i]));
      }
    }
  }

  if (!options.allow_duplicate_patterns) {
    std::map<Pattern, std::size_t> seen;
    for (std::size_t m = 0; m < sets.size(); ++m) {
      auto [it, inserted] = seen.emplace(sets[m], m + 1);
      if (!inserted) {
        fail(ErrorCode::kDuplicatePattern, "patterns " + std::to_string(it->second) + " and " +
                                               std::to_string(m + 1) + " are equal");
      }
    }
  }

  PatternFamily family;
  family.alphabet_size_ = alphabet_size;
  family.sets_ = std::move(sets);
  family.label_ = std::move(label);
  return family;
}

namespace {

void check_indices(const PatternFamily& family, std::span<const std::size_t> indices) {
  std::vector<std::size_t> sorted(indices.begin(), indices.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] < 1 || sorted[i] > family.size()) {
      fail(ErrorCode::kBadIndexList, "pattern index " + std::to_string(sorted[i]) +
                                         " outside [1, " + std::to_string(family.size()) + "]");
    }
    if (i > 0 && sorted[i] == sorted[i - 1]) {
      fail(ErrorCode::kBadIndexList, "pattern index " + std::to_string(sorted[i]) + " repeated");
    }
  }
}

}  // namespace

AtomRefiner::AtomRefiner(const PatternFamily& family)
    : family_(&family),
      cell_of_(family.alphabet_size(), 0),
      sizes_{family.alphabet_size()},
      signatures_{Signature{}} {}

void AtomRefiner::add(std::size_t index) {
  if (index < 1 || index > family_->size()) {
    fail(ErrorCode::kBadIndexList, "pattern index " + std::to_string(index) + " outside [1, " +
                                       std::to_string(family_->size()) + "]");
  }
  if (std::find(indices_.begin(), indices_.end(), index) != indices_.end()) {
    fail(ErrorCode::kBadIndexList, "pattern index " + std::to_string(index) + " repeated");
  }

  const std::uint32_t k = family_->alphabet_size();
  std::vector<std::uint8_t> member(k, 0);
  for (std::uint32_t v : family_->pattern(index)) member[v - 1] = 1;

  constexpr std::uint32_t kUnassigned = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> child(2 * sizes_.size(), kUnassigned);
  std::vector<std::uint64_t> sizes;
  std::vector<Signature> signatures;
  sizes.reserve(std::min<std::size_t>(2 * sizes_.size(), k));

  for (std::uint32_t v = 0; v < k; ++v) {
    const std::size_t slot = 2 * cell_of_[v] + member[v];
    if (child[slot] == kUnassigned) {
      child[slot] = static_cast<std::uint32_t>(sizes.size());
      sizes.push_back(0);
      Signature sig = signatures_[cell_of_[v]];
      sig.push_back(member[v]);
      signatures.push_back(std::move(sig));
    }
    cell_of_[v] = child[slot];
    ++sizes[child[slot]];
  }

  sizes_ = std::move(sizes);
  signatures_ = std::move(signatures);
  indices_.push_back(index);
}

AtomPartition AtomRefiner::partition() const {
  AtomPartition out;
  out.ordered_indices = indices_;
  out.cells.reserve(sizes_.size());
  for (std::size_t c = 0; c < sizes_.size(); ++c) out.cells.push_back({signatures_[c], sizes_[c]});
  return out;
}

std::vector<std::vector<std::uint32_t>> AtomRefiner::members() const {
  std::vector<std::vector<std::uint32_t>> out(sizes_.size());
  for (std::size_t c = 0; c < sizes_.size(); ++c) out[c].reserve(sizes_[c]);
  for (std::uint32_t v = 0; v < cell_of_.size(); ++v) out[cell_of_[v]].push_back(v + 1);
  return out;
}

AtomPartition atoms(const PatternFamily& family, std::span<const std::size_t> indices) {
  check_indices(family, indices);
  AtomRefiner refiner(family);
  for (std::size_t index : indices) refiner.add(index);
  return refiner.partition();
}

JointBitDistribution::JointBitDistribution(
    std::size_t arity, std::uint64_t denominator,
    std::vector<std::pair<Signature, std::uint64_t>> masses)
    : arity_(arity), denominator_(denominator) {
  if (denominator == 0) fail(ErrorCode::kDomainError, "distribution denominator is zero");
  std::map<Signature, std::uint64_t> merged;
  std::uint64_t total = 0;
  for (auto& [sig, count] : masses) {
    if (sig.size() != arity) {
      fail(ErrorCode::kDomainError, "signature length does not match arity");
    }
    for (auto bit : sig) {
      if (bit > 1) fail(ErrorCode::kDomainError, "signature entries must be 0 or 1");
    }
    total += count;
    if (count != 0) merged[sig] += count;
  }
  if (total != denominator) {
    fail(ErrorCode::kDomainError, "masses do not sum to one");
  }
  masses_.assign(merged.begin(), merged.end());
}

std::uint64_t JointBitDistribution::count(const Signature& sig) const {
  auto it = std::lower_bound(masses_.begin(), masses_.end(), sig,
                             [](const auto& entry, const Signature& s) { return entry.first < s; });
  return (it != masses_.end() && it->first == sig) ? it->second : 0;
}

JointBitDistribution JointBitDistribution::marginal(
    std::span<const std::size_t> coordinates) const {
  for (std::size_t c : coordinates) {
    if (c >= arity_) fail(ErrorCode::kBadSplit, "marginal coordinate outside arity");
  }
  std::vector<std::pair<Signature, std::uint64_t>> out;
  out.reserve(masses_.size());
  for (const auto& [sig, count] : masses_) {
    Signature projected;
    projected.reserve(coordinates.size());
    for (std::size_t c : coordinates) projected.push_back(sig[c]);
    out.emplace_back(std::move(projected), count);
  }
  return JointBitDistribution(coordinates.size(), denominator_, std::move(out));
}

JointBitDistribution JointBitDistribution::prefix(std::size_t length) const {
  std::vector<std::size_t> coords(length);
  for (std::size_t i = 0; i < length; ++i) coords[i] = i;
  return marginal(coords);
}

JointBitDistribution joint_distribution(const PatternFamily& family,
                                        std::span<const std::size_t> indices) {
  const AtomPartition partition = atoms(family, indices);
  std::vector<std::pair<Signature, std::uint64_t>> masses;
  masses.reserve(partition.cells.size());
  for (const auto& cell : partition.cells) masses.emplace_back(cell.signature, cell.size);
  return JointBitDistribution(indices.size(), family.alphabet_size(), std::move(masses));
}

std::string save_family(const PatternFamily& family) {
  nlohmann::ordered_json doc;
  doc["K"] = family.alphabet_size();
  doc["label"] = family.label();
  doc["sets"] = family.sets();
  return doc.dump() + "\n";
}

PatternFamily load_family(const std::string& document, BuildOptions options) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(document);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::kParseError, std::string("family document: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("K") || !doc.contains("sets")) {
    fail(ErrorCode::kParseError, "family document needs \"K\" and \"sets\"");
  }
  const auto& k = doc["K"];
  if (!k.is_number_integer()) fail(ErrorCode::kParseError, "\"K\" must be an integer");
  const auto k_value = k.get<std::int64_t>();
  if (k_value < 1 || k_value > std::numeric_limits<std::uint32_t>::max()) {
    fail(ErrorCode::kDomainError, "\"K\" must be a positive 32-bit integer");
  }

  std::string label;
  if (doc.contains("label")) {
    if (!doc["label"].is_string()) fail(ErrorCode::kParseError, "\"label\" must be a string");
    label = doc["label"].get<std::string>();
  }

  const auto& sets_doc = doc["sets"];
  if (!sets_doc.is_array()) fail(ErrorCode::kParseError, "\"sets\" must be an array");
  std::vector<Pattern> sets;
  for (const auto& set_doc : sets_doc) {
    if (!set_doc.is_array()) fail(ErrorCode::kParseError, "each set must be an array");
    Pattern set;
    for (const auto& v : set_doc) {
      if (!v.is_number_integer()) fail(ErrorCode::kParseError, "set entries must be integers");
      const auto value = v.get<std::int64_t>();
      if (value < 1 || value > k_value) {
        fail(ErrorCode::kIndexOutOfRange, "set entry " + std::to_string(value) +
                                              " outside [1, " + std::to_string(k_value) + "]");
      }
      set.push_back(static_cast<std::uint32_t>(value));
    }
    sets.push_back(std::move(set));
  }
  return build_family(static_cast<std::uint32_t>(k_value), std::move(sets), std::move(label),
                      options);
}

}  // namespace privsearch
