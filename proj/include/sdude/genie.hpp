#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

#include "sdude/estimated_loss.hpp"
#include "sdude/shifting.hpp"

namespace sdude {

struct GenieResult {
  double normalized_loss = 0.0;  // D_{k,m}: per-symbol over the interior
  double cumulative_loss = 0.0;  // unnormalized
  SwitchingSchedule schedule;
};

/// Best achievable loss with clean-sequence hindsight over all schedules with
/// at most m switches per context. Runs the shifting-denoiser DP with the true
/// per-step loss Lambda(x_t, s(z_t)); m = 0 gives the k-th order minimum loss.
GenieResult genie_min_loss(const SymbolSequence& x, const SymbolSequence& z, std::size_t k,
                           std::size_t m, const LossMatrix& loss);

/// Enumeration budget per context for brute_force_min.
inline constexpr std::uint64_t kBruteForceBudget = 1'000'000;

/// Per-step loss for the brute-force oracle: (1-based position t, denoiser s).
using StepLossFn = std::function<double(std::size_t t, std::size_t s)>;

/// Exhaustive minimum of the cumulative loss over every schedule with at most
/// min(n(c), m) switches within each context subsequence. Contexts are grouped
/// independently of ContextPartition. Throws TooLarge when a context would need
/// more than kBruteForceBudget candidates.
double brute_force_min(const SymbolSequence& z, std::size_t k, std::size_t m,
                       std::size_t denoisers, const StepLossFn& step_loss);

/// Estimated-loss mode: step loss ell(z_t, s).
double brute_force_min(const SymbolSequence& z, std::size_t k, std::size_t m,
                       const EstimatedLossTable& tables);

/// True-loss mode: step loss Lambda(x_t, s(z_t)).
double brute_force_min(const SymbolSequence& x, const SymbolSequence& z, std::size_t k,
                       std::size_t m, const LossMatrix& loss);

/// Number of schedules of length `length` over `denoisers` choices with at most
/// `switches` changes: sum_j C(length-1, j) N (N-1)^j. Saturates at UINT64_MAX.
std::uint64_t schedule_count(std::size_t length, std::size_t switches, std::size_t denoisers);

}  // namespace sdude
