#include "sdude/context_index.hpp"

#include <algorithm>
#include <limits>

namespace sdude {

namespace {

// |Z|^{2k} must be representable as a context id.
void check_context_space(std::size_t alphabet_size, std::size_t k) {
  if (alphabet_size <= 1) return;
  ContextId space = 1;
  for (std::size_t i = 0; i < 2 * k; ++i) {
    if (space > std::numeric_limits<ContextId>::max() / alphabet_size) {
      throw TooLarge("context space |Z|^(2k) overflows 64-bit ids");
    }
    space *= alphabet_size;
  }
}

}  // namespace

ContextPartition build_partition(const SymbolSequence& z, std::size_t k) {
  const std::size_t n = z.size();
  if (n <= 2 * k) {
    throw SequenceTooShort("sequence of length " + std::to_string(n) +
                           " has no interior for context half-width " + std::to_string(k));
  }
  check_context_space(z.alphabet_size(), k);

  ContextPartition part;
  part.k_ = k;
  part.n_ = n;
  part.alphabet_size_ = z.alphabet_size();
  const std::size_t interior = n - 2 * k;
  part.slot_of_interior_.resize(interior);

  const auto q = static_cast<ContextId>(z.alphabet_size());
  const auto sym = z.symbols();
  for (std::size_t p = 0; p < interior; ++p) {
    const std::size_t center = p + k;  // 0-based index of z_t
    ContextId id = 0;
    for (std::size_t i = center - k; i < center; ++i) id = id * q + sym[i];
    for (std::size_t i = center + 1; i <= center + k; ++i) id = id * q + sym[i];
    auto [it, inserted] =
        part.slot_by_id_.try_emplace(id, static_cast<std::uint32_t>(part.slot_ids_.size()));
    if (inserted) part.slot_ids_.push_back(id);
    part.slot_of_interior_[p] = it->second;
  }
  part.finalize_occurrences();
  return part;
}

void ContextPartition::finalize_occurrences() {
  offsets_.assign(slot_ids_.size() + 1, 0);
  for (auto slot : slot_of_interior_) ++offsets_[slot + 1];
  for (std::size_t s = 0; s < slot_ids_.size(); ++s) offsets_[s + 1] += offsets_[s];
  positions_.resize(slot_of_interior_.size());
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t p = 0; p < slot_of_interior_.size(); ++p) {
    positions_[cursor[slot_of_interior_[p]]++] = p + k_ + 1;
  }
}

ContextId ContextPartition::context_of(std::size_t t) const {
  if (t < first_position() || t > last_position()) {
    throw RangeError("position " + std::to_string(t) + " outside interior " +
                     std::to_string(first_position()) + ".." + std::to_string(last_position()));
  }
  return slot_ids_[slot_of_interior_[t - k_ - 1]];
}

std::span<const std::size_t> ContextPartition::slot_occurrences(std::uint32_t slot) const {
  return std::span<const std::size_t>(positions_).subspan(offsets_[slot],
                                                          offsets_[slot + 1] - offsets_[slot]);
}

std::span<const std::size_t> ContextPartition::occurrences(ContextId id) const {
  const auto it = slot_by_id_.find(id);
  if (it == slot_by_id_.end()) return {};
  return slot_occurrences(it->second);
}

std::pair<std::vector<Symbol>, std::vector<Symbol>> ContextPartition::decode(ContextId id) const {
  std::vector<Symbol> digits(2 * k_);
  for (std::size_t i = digits.size(); i-- > 0;) {
    digits[i] = static_cast<Symbol>(id % alphabet_size_);
    id /= alphabet_size_;
  }
  return {std::vector<Symbol>(digits.begin(), digits.begin() + static_cast<std::ptrdiff_t>(k_)),
          std::vector<Symbol>(digits.begin() + static_cast<std::ptrdiff_t>(k_), digits.end())};
}

ContextPartition ContextPartition::from_occurrences(
    std::size_t k, std::size_t n, std::size_t alphabet_size,
    const std::map<ContextId, std::vector<std::size_t>>& occurrences) {
  if (n <= 2 * k) throw SequenceTooShort("sequence has no interior");
  const std::size_t interior = n - 2 * k;
  constexpr auto kUnset = std::numeric_limits<ContextId>::max();
  std::vector<ContextId> id_at(interior, kUnset);
  for (const auto& [id, list] : occurrences) {
    for (std::size_t t : list) {
      if (t < k + 1 || t > n - k) throw RangeError("occurrence outside interior");
      if (id_at[t - k - 1] != kUnset) throw ValidationError("position listed twice");
      id_at[t - k - 1] = id;
    }
  }
  ContextPartition part;
  part.k_ = k;
  part.n_ = n;
  part.alphabet_size_ = alphabet_size;
  part.slot_of_interior_.resize(interior);
  for (std::size_t p = 0; p < interior; ++p) {
    if (id_at[p] == kUnset) throw ValidationError("occurrence lists do not cover the interior");
    auto [it, inserted] =
        part.slot_by_id_.try_emplace(id_at[p], static_cast<std::uint32_t>(part.slot_ids_.size()));
    if (inserted) part.slot_ids_.push_back(id_at[p]);
    part.slot_of_interior_[p] = it->second;
  }
  part.finalize_occurrences();
  return part;
}

bool ContextPartition::operator==(const ContextPartition& other) const {
  return k_ == other.k_ && n_ == other.n_ && alphabet_size_ == other.alphabet_size_ &&
         slot_of_interior_ == other.slot_of_interior_ && slot_ids_ == other.slot_ids_ &&
         offsets_ == other.offsets_ && positions_ == other.positions_;
}

std::vector<std::size_t> count_vector(const ContextPartition& partition, const SymbolSequence& z,
                                      ContextId context) {
  std::vector<std::size_t> counts(z.alphabet_size(), 0);
  for (std::size_t t : partition.occurrences(context)) ++counts[z.at_position(t)];
  return counts;
}

}  // namespace sdude
