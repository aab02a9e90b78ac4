#include "sdude/shifting.hpp"

#include <algorithm>
#include <limits>

#include "sdude/numeric.hpp"

namespace sdude {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
// Upper bound on DP table entries (doubles) for a single run.
constexpr std::size_t kMaxTableEntries = std::size_t{1} << 30;

std::uint32_t first_argmin(const double* row, std::size_t count) {
  std::uint32_t best = 0;
  for (std::size_t j = 1; j < count; ++j) {
    if (row[j] < row[best]) best = static_cast<std::uint32_t>(j);
  }
  return best;
}

}  // namespace

StepLoss::StepLoss(std::vector<double> rows, std::size_t denoisers,
                   std::vector<std::uint32_t> keys)
    : rows_(std::move(rows)), denoisers_(denoisers), keys_(std::move(keys)) {
  if (denoisers_ == 0 || rows_.size() % denoisers_ != 0) {
    throw ValidationError("step-loss rows must be a whole number of denoiser rows");
  }
  const std::size_t row_count = rows_.size() / denoisers_;
  for (auto key : keys_) {
    if (key >= row_count) throw ValidationError("step-loss key outside the row table");
  }
}

StepLoss estimated_step_loss(const EstimatedLossTable& tables, const SymbolSequence& z,
                             std::size_t k) {
  if (z.alphabet_size() != tables.alphabets.noisy_size) {
    throw ValidationError("sequence alphabet does not match the noisy alphabet");
  }
  if (z.size() <= 2 * k) throw SequenceTooShort("sequence has no interior");
  const std::size_t q = tables.alphabets.noisy_size;
  const std::size_t den = tables.denoiser_count();
  std::vector<double> rows(q * den);
  for (std::size_t zs = 0; zs < q; ++zs) {
    for (std::size_t s = 0; s < den; ++s) rows[zs * den + s] = tables(static_cast<Symbol>(zs), s);
  }
  std::vector<std::uint32_t> keys(z.size() - 2 * k);
  for (std::size_t p = 0; p < keys.size(); ++p) keys[p] = z[p + k];
  return StepLoss(std::move(rows), den, std::move(keys));
}

StepLoss true_step_loss(const SymbolSequence& x, const SymbolSequence& z, std::size_t k,
                        const LossMatrix& loss) {
  if (x.size() != z.size()) throw ValidationError("clean and noisy lengths differ");
  if (x.alphabet_size() != loss.clean_size()) {
    throw ValidationError("clean alphabet does not match the loss matrix");
  }
  if (z.size() <= 2 * k) throw SequenceTooShort("sequence has no interior");
  const DenoiserTable denoisers(z.alphabet_size(), loss.recon_size());
  const std::size_t q = z.alphabet_size();
  const std::size_t den = denoisers.count();
  std::vector<double> rows(x.alphabet_size() * q * den);
  for (Symbol xs = 0; xs < x.alphabet_size(); ++xs) {
    for (Symbol zs = 0; zs < q; ++zs) {
      for (std::size_t s = 0; s < den; ++s) {
        rows[(xs * q + zs) * den + s] = loss(xs, denoisers.output(s, zs));
      }
    }
  }
  std::vector<std::uint32_t> keys(z.size() - 2 * k);
  for (std::size_t p = 0; p < keys.size(); ++p) {
    keys[p] = static_cast<std::uint32_t>(x[p + k] * q + z[p + k]);
  }
  return StepLoss(std::move(rows), den, std::move(keys));
}

DPState::DPState(ContextPartition partition, std::size_t m, std::size_t denoisers)
    : partition_(std::move(partition)), rows_(m + 1), denoisers_(denoisers) {
  const std::size_t interior = partition_.interior_size();
  if (interior > kMaxTableEntries / rows_ / denoisers_) {
    throw TooLarge("forward-pass tables exceed the supported size");
  }
  values_.resize(interior * rows_ * denoisers_);
  argmins_.resize(interior * rows_);
}

double DPState::context_minimum(std::uint32_t slot) const {
  const auto occ = partition_.slot_occurrences(slot);
  const std::size_t last = occ.back() - partition_.k() - 1;
  return row_minimum(last, rows_ - 1);
}

double DPState::minimum_total() const {
  CompensatedSum total;
  for (std::uint32_t slot = 0; slot < partition_.context_count(); ++slot) {
    total.add(context_minimum(slot));
  }
  return total.value();
}

std::size_t max_switch_budget(std::size_t n, std::size_t k) {
  return n > 2 * k ? (n - 2 * k) / 2 : 0;
}

DPState forward_pass(ContextPartition partition, const StepLoss& step_loss, std::size_t m) {
  const std::size_t n = partition.sequence_length();
  const std::size_t k = partition.k();
  if (m > max_switch_budget(n, k)) {
    throw RangeError("switch budget m=" + std::to_string(m) + " exceeds floor((n-2k)/2)=" +
                     std::to_string(max_switch_budget(n, k)));
  }
  if (step_loss.size() != partition.interior_size()) {
    throw ValidationError("step loss does not cover the interior");
  }
  const std::size_t den = step_loss.denoiser_count();
  DPState state(std::move(partition), m, den);
  const std::size_t rows = state.rows_;
  const std::size_t stride = rows * den;
  const ContextPartition& part = state.partition_;

  // Most recent interior index seen for each context slot.
  std::vector<std::size_t> last(part.context_count(), kNone);
  double* values = state.values_.data();
  std::uint32_t* argmins = state.argmins_.data();

  for (std::size_t p = 0; p < part.interior_size(); ++p) {
    const std::uint32_t slot = part.slot_at(p);
    const double* loss = step_loss.row(p).data();
    double* cur = values + p * stride;
    std::uint32_t* cur_arg = argmins + p * rows;
    const std::size_t prev_p = last[slot];

    if (prev_p == kNone) {
      const std::uint32_t best = first_argmin(loss, den);
      for (std::size_t i = 0; i < rows; ++i) {
        std::copy(loss, loss + den, cur + i * den);
        cur_arg[i] = best;
      }
    } else {
      const double* prev = values + prev_p * stride;
      const std::uint32_t* prev_arg = argmins + prev_p * rows;
      for (std::size_t j = 0; j < den; ++j) cur[j] = prev[j] + loss[j];
      cur_arg[0] = first_argmin(cur, den);
      for (std::size_t i = 1; i < rows; ++i) {
        // Best value reachable by switching into this position.
        const double switch_in = prev[(i - 1) * den + prev_arg[i - 1]];
        const double* prev_row = prev + i * den;
        double* row = cur + i * den;
        for (std::size_t j = 0; j < den; ++j) {
          row[j] = std::min(prev_row[j], switch_in) + loss[j];
        }
        cur_arg[i] = first_argmin(row, den);
      }
    }
    last[slot] = p;
  }
  return state;
}

DPState forward_pass(const SymbolSequence& z, std::size_t k, std::size_t m,
                     const EstimatedLossTable& tables) {
  const StepLoss step = estimated_step_loss(tables, z, k);
  return forward_pass(build_partition(z, k), step, m);
}

std::size_t SwitchingSchedule::total_switches() const {
  std::size_t total = 0;
  for (const auto& [id, count] : per_context_switches) total += count;
  return total;
}

SwitchingSchedule backward_pass(const DPState& state) {
  const ContextPartition& part = state.partition();
  const std::size_t interior = part.interior_size();
  const std::size_t top = state.rows() - 1;

  SwitchingSchedule schedule;
  schedule.k = part.k();
  schedule.m = state.max_switches();
  schedule.assignment.resize(interior);

  // Per slot: row pointer r, denoiser pointer q, and whether the slot has been
  // seen yet (i.e. a later occurrence exists).
  std::vector<std::size_t> row(part.context_count(), top);
  std::vector<std::uint32_t> den(part.context_count(), 0);
  std::vector<bool> seen(part.context_count(), false);
  std::vector<std::size_t> switches(part.context_count(), 0);

  for (std::size_t p = interior; p-- > 0;) {
    const std::uint32_t slot = part.slot_at(p);
    if (!seen[slot]) {
      row[slot] = top;
      den[slot] = state.argmin(p, top);
      seen[slot] = true;
    } else {
      // The later occurrence took min{M_p(r, q), M_p(r-1, argmin)}. Switch
      // only when the second term is strictly smaller.
      const std::size_t r = row[slot];
      const std::uint32_t q = den[slot];
      if (r > 0 && state.row_minimum(p, r - 1) < state.value(p, r, q)) {
        row[slot] = r - 1;
        const std::uint32_t next = state.argmin(p, r - 1);
        if (next != q) ++switches[slot];
        den[slot] = next;
      }
    }
    schedule.assignment[p] = den[slot];
  }
  for (std::uint32_t slot = 0; slot < part.context_count(); ++slot) {
    schedule.per_context_switches.emplace(part.slot_context(slot), switches[slot]);
  }
  return schedule;
}

double schedule_loss(const SwitchingSchedule& schedule, const StepLoss& step_loss) {
  if (schedule.assignment.size() != step_loss.size()) {
    throw ValidationError("schedule and step loss cover different interiors");
  }
  CompensatedSum total;
  for (std::size_t p = 0; p < schedule.assignment.size(); ++p) {
    total.add(step_loss.row(p)[schedule.assignment[p]]);
  }
  return total.value();
}

ShiftingResult sdude_denoise(const SymbolSequence& z, std::size_t k, std::size_t m,
                             const ChannelModel& channel, const LossMatrix& loss,
                             const BoundaryPolicy& boundary) {
  if (z.alphabet_size() != channel.noisy_size()) {
    throw ValidationError("sequence alphabet does not match the channel output alphabet");
  }
  const EstimatedLossTable tables = build_tables(channel, loss);
  const StepLoss step = estimated_step_loss(tables, z, k);
  DPState state = forward_pass(build_partition(z, k), step, m);
  SwitchingSchedule schedule = backward_pass(state);

  const DenoiserTable denoisers(channel.noisy_size(), loss.recon_size());
  std::vector<Symbol> out(z.size());
  fill_boundary(z, k, loss.recon_size(), boundary, out);
  for (std::size_t p = 0; p < schedule.assignment.size(); ++p) {
    out[p + k] = denoisers.output(schedule.assignment[p], z[p + k]);
  }
  const double estimated =
      schedule_loss(schedule, step) / static_cast<double>(schedule.assignment.size());
  return {SymbolSequence(std::move(out), loss.recon_size()), std::move(schedule), estimated};
}

}  // namespace sdude
