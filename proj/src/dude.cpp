#include "sdude/dude.hpp"

#include <algorithm>

#include "sdude/estimated_loss.hpp"

namespace sdude {

void fill_boundary(const SymbolSequence& z, std::size_t k, std::size_t recon_size,
                   const BoundaryPolicy& policy, std::vector<Symbol>& out) {
  const std::size_t n = z.size();
  BoundaryRule rule = policy.rule;
  if (rule == BoundaryRule::kAuto) {
    rule = recon_size >= z.alphabet_size() ? BoundaryRule::kCopyNoisy : BoundaryRule::kFixed;
  }
  const Symbol fixed = policy.rule == BoundaryRule::kAuto ? 0 : policy.fixed_symbol;
  if (rule == BoundaryRule::kFixed && fixed >= recon_size) {
    throw ValidationError("boundary symbol outside the reconstruction alphabet");
  }
  if (rule == BoundaryRule::kCopyNoisy && recon_size < z.alphabet_size()) {
    throw ValidationError("cannot copy noisy symbols into a smaller reconstruction alphabet");
  }
  const std::size_t edge = std::min(k, n);
  auto emit = [&](std::size_t i) { out[i] = rule == BoundaryRule::kCopyNoisy ? z[i] : fixed; };
  for (std::size_t i = 0; i < edge; ++i) emit(i);
  for (std::size_t i = n - edge; i < n; ++i) emit(i);
}

SymbolSequence dude_denoise(const SymbolSequence& z, std::size_t k, const ChannelModel& channel,
                            const LossMatrix& loss, const BoundaryPolicy& boundary) {
  if (z.alphabet_size() != channel.noisy_size()) {
    throw ValidationError("sequence alphabet does not match the channel output alphabet");
  }
  const ContextPartition partition = build_partition(z, k);
  const std::size_t q = channel.noisy_size();
  const std::size_t contexts = partition.context_count();

  // Per context, the reconstruction chosen for each noisy symbol.
  std::vector<Symbol> rule(contexts * q);
  Vector counts(static_cast<Eigen::Index>(q));
  for (std::uint32_t slot = 0; slot < contexts; ++slot) {
    counts.setZero();
    for (std::size_t t : partition.slot_occurrences(slot)) counts(z.at_position(t)) += 1.0;
    for (Symbol zs = 0; zs < q; ++zs) rule[slot * q + zs] = b_h_rule(counts, zs, channel, loss);
  }

  std::vector<Symbol> out(z.size());
  fill_boundary(z, k, loss.recon_size(), boundary, out);
  for (std::size_t p = 0; p < partition.interior_size(); ++p) {
    out[p + k] = rule[partition.slot_at(p) * q + z[p + k]];
  }
  return SymbolSequence(std::move(out), loss.recon_size());
}

}  // namespace sdude
