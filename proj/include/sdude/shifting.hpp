#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "sdude/context_index.hpp"
#include "sdude/core_model.hpp"
#include "sdude/dude.hpp"
#include "sdude/estimated_loss.hpp"

namespace sdude {

/// Loss charged at each interior position for each single-symbol denoiser.
///
/// Rows are shared: `keys[p]` selects one of a small number of precomputed
/// rows of length N. For the estimated loss the key is z_t and the row is
/// ell(z_t, .); for the genie loss the key is (x_t, z_t) and the row is
/// Lambda(x_t, s(z_t)).
class StepLoss {
 public:
  StepLoss(std::vector<double> rows, std::size_t denoisers, std::vector<std::uint32_t> keys);

  std::size_t denoiser_count() const { return denoisers_; }
  std::size_t size() const { return keys_.size(); }
  std::span<const double> row(std::size_t p) const {
    return {rows_.data() + static_cast<std::size_t>(keys_[p]) * denoisers_, denoisers_};
  }

 private:
  std::vector<double> rows_;
  std::size_t denoisers_;
  std::vector<std::uint32_t> keys_;
};

StepLoss estimated_step_loss(const EstimatedLossTable& tables, const SymbolSequence& z,
                             std::size_t k);
StepLoss true_step_loss(const SymbolSequence& x, const SymbolSequence& z, std::size_t k,
                        const LossMatrix& loss);

/// Forward-pass tables. For interior index p (t = p + k + 1) and row i
/// (at most i switches, 0-based), value(p, i, j) is the smallest cumulative
/// loss over the occurrences of c_t up to t that ends in denoiser j, and
/// argmin(p, i) the first j attaining the row minimum.
class DPState {
 public:
  DPState(ContextPartition partition, std::size_t m, std::size_t denoisers);

  const ContextPartition& partition() const { return partition_; }
  std::size_t max_switches() const { return rows_ - 1; }
  std::size_t rows() const { return rows_; }
  std::size_t denoiser_count() const { return denoisers_; }

  double value(std::size_t p, std::size_t i, std::size_t j) const {
    return values_[(p * rows_ + i) * denoisers_ + j];
  }
  std::uint32_t argmin(std::size_t p, std::size_t i) const { return argmins_[p * rows_ + i]; }
  double row_minimum(std::size_t p, std::size_t i) const { return value(p, i, argmin(p, i)); }

  /// Minimum over the last row at the final occurrence of the context in
  /// `slot`: the best cumulative loss of that context's subsequence.
  double context_minimum(std::uint32_t slot) const;
  /// Sum of the per-context minima.
  double minimum_total() const;

 private:
  friend DPState forward_pass(ContextPartition partition, const StepLoss& step_loss,
                              std::size_t m);
  ContextPartition partition_;
  std::size_t rows_;
  std::size_t denoisers_;
  std::vector<double> values_;
  std::vector<std::uint32_t> argmins_;
};

/// Largest switch budget accepted for a sequence: floor((n - 2k) / 2).
std::size_t max_switch_budget(std::size_t n, std::size_t k);

/// First pass of the shifting denoiser. Throws RangeError when m exceeds
/// max_switch_budget and TooLarge when the tables would not fit in memory.
DPState forward_pass(ContextPartition partition, const StepLoss& step_loss, std::size_t m);
DPState forward_pass(const SymbolSequence& z, std::size_t k, std::size_t m,
                     const EstimatedLossTable& tables);

/// A single-symbol denoiser for every interior position, with at most m
/// switches along each context's occurrences.
struct SwitchingSchedule {
  std::size_t k = 0;
  std::size_t m = 0;
  std::vector<std::uint32_t> assignment;                 // by interior index p
  std::map<ContextId, std::size_t> per_context_switches;

  // 1-based position t in k+1..n-k.
  std::uint32_t denoiser_at(std::size_t t) const { return assignment.at(t - k - 1); }
  std::size_t total_switches() const;
};

/// Second pass: follows the stored tables backwards from each context's last
/// occurrence and extracts a schedule attaining the forward minimum. Among
/// optimal continuations the one without a switch is preferred.
SwitchingSchedule backward_pass(const DPState& state);

/// Sum of the step losses along a schedule, in time order (compensated).
double schedule_loss(const SwitchingSchedule& schedule, const StepLoss& step_loss);

struct ShiftingResult {
  SymbolSequence output;
  SwitchingSchedule schedule;
  double estimated_loss = 0.0;  // normalized by n - 2k
};

/// The (k,m) shifting DUDE: minimizes the cumulative estimated loss over all
/// schedules with at most m switches per context and applies the result.
ShiftingResult sdude_denoise(const SymbolSequence& z, std::size_t k, std::size_t m,
                             const ChannelModel& channel, const LossMatrix& loss,
                             const BoundaryPolicy& boundary = {});

}  // namespace sdude
