#pragma once

#include <cstddef>
#include <vector>

#include "sdude/context_index.hpp"
#include "sdude/core_model.hpp"

namespace sdude {

/// What to emit at the 2k boundary positions that have no full context.
///
/// kAuto copies the noisy symbol when the reconstruction alphabet is at least
/// as large as the noisy one and emits symbol 0 otherwise.
enum class BoundaryRule { kAuto, kCopyNoisy, kFixed };

struct BoundaryPolicy {
  BoundaryRule rule = BoundaryRule::kAuto;
  Symbol fixed_symbol = 0;
};

/// Writes the boundary positions t <= k and t > n-k of `out` (0-based storage
/// of length n).
void fill_boundary(const SymbolSequence& z, std::size_t k, std::size_t recon_size,
                   const BoundaryPolicy& policy, std::vector<Symbol>& out);

/// k-th order DUDE: x_t = B_H(m(z^n, c_t), z_t) on the interior.
SymbolSequence dude_denoise(const SymbolSequence& z, std::size_t k, const ChannelModel& channel,
                            const LossMatrix& loss, const BoundaryPolicy& boundary = {});

}  // namespace sdude
