#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <unordered_map>
#include <vector>

#include "sdude/types.hpp"

namespace sdude {

using ContextId = std::uint64_t;

/// Partition of the interior positions t = k+1..n-k (1-based) by two-sided
/// context (z_{t-k}..z_{t-1}, z_{t+1}..z_{t+k}).
///
/// A context id is the base-|Z| number whose digits, most significant first,
/// are z_{t-k}, ..., z_{t-1}, z_{t+1}, ..., z_{t+k}. Only contexts that occur
/// are stored. Internally every occurring context also gets a dense slot
/// number, assigned in order of first occurrence; the DP code works on slots.
class ContextPartition {
 public:
  std::size_t k() const { return k_; }
  std::size_t sequence_length() const { return n_; }
  std::size_t alphabet_size() const { return alphabet_size_; }
  std::size_t interior_size() const { return slot_of_interior_.size(); }
  std::size_t first_position() const { return k_ + 1; }
  std::size_t last_position() const { return n_ - k_; }
  std::size_t context_count() const { return slot_ids_.size(); }

  /// Context id at 1-based interior position t. Throws RangeError outside
  /// k+1..n-k.
  ContextId context_of(std::size_t t) const;

  /// Occurrence list (1-based, increasing) of a context; empty when the
  /// context never occurs.
  std::span<const std::size_t> occurrences(ContextId id) const;

  bool contains(ContextId id) const { return slot_by_id_.contains(id); }

  /// Occurring context ids in first-occurrence order.
  std::span<const ContextId> contexts() const { return slot_ids_; }

  // Slot-level view, 0-based interior index p = t - k - 1.
  std::uint32_t slot_at(std::size_t p) const { return slot_of_interior_[p]; }
  std::span<const std::uint32_t> slots() const { return slot_of_interior_; }
  std::span<const std::size_t> slot_occurrences(std::uint32_t slot) const;
  ContextId slot_context(std::uint32_t slot) const { return slot_ids_[slot]; }

  /// Left and right halves of a context id, each in time order.
  std::pair<std::vector<Symbol>, std::vector<Symbol>> decode(ContextId id) const;

  /// Builds a partition from explicit occurrence lists in any order. Positions
  /// are sorted and slots renumbered so that the result equals the partition
  /// built from the underlying sequence.
  static ContextPartition from_occurrences(
      std::size_t k, std::size_t n, std::size_t alphabet_size,
      const std::map<ContextId, std::vector<std::size_t>>& occurrences);

  bool operator==(const ContextPartition& other) const;

 private:
  friend ContextPartition build_partition(const SymbolSequence& z, std::size_t k);
  void finalize_occurrences();

  std::size_t k_ = 0;
  std::size_t n_ = 0;
  std::size_t alphabet_size_ = 1;
  std::vector<std::uint32_t> slot_of_interior_;
  std::vector<ContextId> slot_ids_;
  std::unordered_map<ContextId, std::uint32_t> slot_by_id_;
  // CSR layout of the per-slot occurrence lists.
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> positions_;
};

/// Throws SequenceTooShort when n <= 2k and TooLarge when |Z|^{2k} does not fit
/// in a 64-bit context id.
ContextPartition build_partition(const SymbolSequence& z, std::size_t k);

/// Symbol counts m(z^n, c): counts[b] = #{t in occurrences(c) : z_t = b}. A
/// context that never occurs yields the zero vector.
std::vector<std::size_t> count_vector(const ContextPartition& partition, const SymbolSequence& z,
                                      ContextId context);

}  // namespace sdude
