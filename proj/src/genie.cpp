#include "sdude/genie.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <vector>

namespace sdude {

GenieResult genie_min_loss(const SymbolSequence& x, const SymbolSequence& z, std::size_t k,
                           std::size_t m, const LossMatrix& loss) {
  if (x.size() != z.size()) {
    throw ValidationError("clean length " + std::to_string(x.size()) + " differs from noisy " +
                          std::to_string(z.size()));
  }
  const StepLoss step = true_step_loss(x, z, k, loss);
  const DPState state = forward_pass(build_partition(z, k), step, m);
  GenieResult result;
  result.schedule = backward_pass(state);
  result.cumulative_loss = schedule_loss(result.schedule, step);
  result.normalized_loss = result.cumulative_loss / static_cast<double>(step.size());
  return result;
}

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > kSaturated / a) return kSaturated;
  return a * b;
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  return b > kSaturated - a ? kSaturated : a + b;
}

// Depth-first enumeration of every schedule over one context subsequence.
class Enumerator {
 public:
  Enumerator(const std::vector<std::size_t>& positions, std::size_t denoisers,
             std::size_t switches, const StepLossFn& step_loss)
      : positions_(positions), denoisers_(denoisers), switches_(switches), step_loss_(step_loss) {}

  double run() {
    for (std::size_t s = 0; s < denoisers_; ++s) {
      visit(1, s, 0, step_loss_(positions_[0], s));
    }
    return best_;
  }

 private:
  void visit(std::size_t index, std::size_t current, std::size_t used, double sum) {
    if (index == positions_.size()) {
      best_ = std::min(best_, sum);
      return;
    }
    const std::size_t t = positions_[index];
    for (std::size_t s = 0; s < denoisers_; ++s) {
      const bool change = s != current;
      if (change && used == switches_) continue;
      visit(index + 1, s, used + (change ? 1 : 0), sum + step_loss_(t, s));
    }
  }

  const std::vector<std::size_t>& positions_;
  std::size_t denoisers_;
  std::size_t switches_;
  const StepLossFn& step_loss_;
  double best_ = std::numeric_limits<double>::infinity();
};

}  // namespace

std::uint64_t schedule_count(std::size_t length, std::size_t switches, std::size_t denoisers) {
  if (length == 0) return 1;
  std::uint64_t total = 0;
  std::uint64_t binom = 1;  // C(length-1, j)
  std::uint64_t power = 1;  // (N-1)^j
  for (std::size_t j = 0; j <= std::min(switches, length - 1); ++j) {
    if (j > 0) {
      // binom stays exact while it fits: C(n,j) = C(n,j-1) * (n-j+1) / j
      binom = binom == kSaturated ? kSaturated : sat_mul(binom, length - j) / j;
      power = sat_mul(power, denoisers - 1);
    }
    total = sat_add(total, sat_mul(sat_mul(binom, denoisers), power));
  }
  return total;
}

double brute_force_min(const SymbolSequence& z, std::size_t k, std::size_t m,
                       std::size_t denoisers, const StepLossFn& step_loss) {
  const std::size_t n = z.size();
  if (n <= 2 * k) throw SequenceTooShort("sequence has no interior");
  if (denoisers == 0) throw ValidationError("no denoisers to enumerate");

  // Group interior positions by the literal context tuple.
  std::map<std::vector<Symbol>, std::vector<std::size_t>> groups;
  for (std::size_t t = k + 1; t <= n - k; ++t) {
    std::vector<Symbol> context;
    for (std::size_t i = t - k; i < t; ++i) context.push_back(z.at_position(i));
    for (std::size_t i = t + 1; i <= t + k; ++i) context.push_back(z.at_position(i));
    groups[context].push_back(t);
  }

  for (const auto& [context, positions] : groups) {
    const std::size_t budget = std::min(positions.size(), m);
    if (schedule_count(positions.size(), budget, denoisers) > kBruteForceBudget) {
      throw TooLarge("brute-force enumeration exceeds the per-context budget");
    }
  }
  double total = 0.0;
  for (const auto& [context, positions] : groups) {
    const std::size_t budget = std::min(positions.size(), m);
    total += Enumerator(positions, denoisers, budget, step_loss).run();
  }
  return total;
}

double brute_force_min(const SymbolSequence& z, std::size_t k, std::size_t m,
                       const EstimatedLossTable& tables) {
  if (z.alphabet_size() != tables.alphabets.noisy_size) {
    throw ValidationError("sequence alphabet does not match the noisy alphabet");
  }
  return brute_force_min(z, k, m, tables.denoiser_count(), [&](std::size_t t, std::size_t s) {
    return tables(z.at_position(t), s);
  });
}

double brute_force_min(const SymbolSequence& x, const SymbolSequence& z, std::size_t k,
                       std::size_t m, const LossMatrix& loss) {
  if (x.size() != z.size()) throw ValidationError("clean and noisy lengths differ");
  const Alphabets alphabets{x.alphabet_size(), z.alphabet_size(), loss.recon_size()};
  const std::size_t count = denoiser_count(alphabets);
  return brute_force_min(z, k, m, count, [&](std::size_t t, std::size_t s) {
    const SingleSymbolDenoiser d = denoiser_from_index(s, alphabets);
    return loss(x.at_position(t), apply_denoiser(d, z.at_position(t)));
  });
}

}  // namespace sdude
