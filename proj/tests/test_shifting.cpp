#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "sdude/estimated_loss.hpp"
#include "sdude/genie.hpp"
#include "sdude/shifting.hpp"

using namespace sdude;

namespace {
const ChannelModel& bsc01() {
  static const ChannelModel c = bsc_channel(0.1);
  return c;
}

std::size_t switches_in(const SwitchingSchedule& s, const ContextPartition& p, ContextId id) {
  std::size_t count = 0;
  const auto occ = p.occurrences(id);
  for (std::size_t i = 1; i < occ.size(); ++i) {
    if (s.denoiser_at(occ[i]) != s.denoiser_at(occ[i - 1])) ++count;
  }
  return count;
}
}  // namespace

TEST_CASE("constant input with k = 0 settles on always-say-0") {
  const SymbolSequence z({0, 0, 0}, 2);
  const EstimatedLossTable t = build_tables(bsc01(), hamming_loss());
  const DPState state = forward_pass(z, 0, 1, t);
  CHECK(state.minimum_total() == doctest::Approx(-0.375).epsilon(1e-12));
  const ShiftingResult r = sdude_denoise(z, 0, 1, bsc01(), hamming_loss());
  CHECK(r.schedule.total_switches() == 0);
  CHECK(r.output == z);
}

TEST_CASE("000111 with one switch") {
  const SymbolSequence z({0, 0, 0, 1, 1, 1}, 2);
  const EstimatedLossTable t = build_tables(bsc01(), hamming_loss());
  CHECK(forward_pass(z, 0, 1, t).minimum_total() == doctest::Approx(-0.75).epsilon(1e-12));
  const ShiftingResult r = sdude_denoise(z, 0, 1, bsc01(), hamming_loss());
  CHECK(r.schedule.assignment == std::vector<std::uint32_t>{0, 0, 0, 3, 3, 3});
  CHECK(r.schedule.total_switches() == 1);
  CHECK(r.output == z);
  CHECK(r.estimated_loss == doctest::Approx(-0.125).epsilon(1e-12));
  CHECK(brute_force_min(z, 0, 1, t) == doctest::Approx(-0.75).epsilon(1e-12));
}

TEST_CASE("switch budget limits") {
  const SymbolSequence z({0, 1, 0, 1, 0, 1}, 2);
  CHECK(max_switch_budget(6, 0) == 3);
  CHECK(max_switch_budget(6, 1) == 2);
  CHECK_NOTHROW(sdude_denoise(z, 0, 3, bsc01(), hamming_loss()));
  CHECK_THROWS_AS(sdude_denoise(z, 0, 4, bsc01(), hamming_loss()), RangeError);
  CHECK_THROWS_AS(sdude_denoise(z, 1, 3, bsc01(), hamming_loss()), RangeError);
  CHECK_THROWS_AS(sdude_denoise(z, 3, 0, bsc01(), hamming_loss()), SequenceTooShort);
}

TEST_CASE("identity channel gives zero estimated loss") {
  std::mt19937_64 rng(41);
  const SymbolSequence z = oracle::random_sequence(rng, 300, 2);
  for (std::size_t m : {0u, 1u, 5u}) {
    const ShiftingResult r = sdude_denoise(z, 1, m, identity_channel(2), hamming_loss());
    CHECK(r.estimated_loss == doctest::Approx(0.0));
    CHECK(r.output == z);
  }
}

TEST_CASE("m = 0 picks the per-context argmin of the summed estimated loss") {
  std::mt19937_64 rng(43);
  const EstimatedLossTable t = build_tables(bsc01(), hamming_loss());
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t k = rng() % 3;
    const SymbolSequence z = oracle::random_sequence(rng, 200, 2);
    const ShiftingResult r = sdude_denoise(z, k, 0, bsc01(), hamming_loss());
    const ContextPartition p = build_partition(z, k);
    for (ContextId id : p.contexts()) {
      std::vector<double> sums(t.denoiser_count(), 0.0);
      for (std::size_t pos : p.occurrences(id))
        for (std::size_t s = 0; s < sums.size(); ++s) sums[s] += t(z.at_position(pos), s);
      const double best = *std::min_element(sums.begin(), sums.end());
      const std::uint32_t chosen = r.schedule.denoiser_at(p.occurrences(id).front());
      CHECK(sums[chosen] <= best + 1e-12);
      CHECK(switches_in(r.schedule, p, id) == 0);
    }
  }
}

TEST_CASE("schedule properties on random inputs") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t nx = 2 + rng() % 2;
    const ChannelModel ch = build_channel(oracle::random_channel(rng, nx, nx));
    const LossMatrix loss(oracle::random_loss(rng, nx, nx));
    const EstimatedLossTable t = build_tables(ch, loss);
    const std::size_t k = rng() % 3;
    const SymbolSequence z = oracle::random_sequence(rng, 2 * k + 20 + rng() % 200, nx);
    const StepLoss step = estimated_step_loss(t, z, k);

    double previous = std::numeric_limits<double>::infinity();
    const std::size_t top = std::min<std::size_t>(6, max_switch_budget(z.size(), k));
    for (std::size_t m = 0; m <= top; ++m) {
      const DPState state = forward_pass(build_partition(z, k), step, m);
      const SwitchingSchedule s = backward_pass(state);
      const ContextPartition& p = state.partition();

      // Feasibility.
      for (ContextId id : p.contexts()) {
        CHECK(switches_in(s, p, id) <= m);
        CHECK(s.per_context_switches.at(id) == switches_in(s, p, id));
      }
      // The extracted schedule attains the forward minimum.
      const double total = state.minimum_total();
      CHECK(std::abs(schedule_loss(s, step) - total) <= 1e-9 * std::max(1.0, std::abs(total)));
      // More switches never hurt.
      CHECK(total <= previous + 1e-12);
      previous = total;
      // Rows allowing more switches are pointwise no larger.
      for (std::size_t pos = 0; pos < p.interior_size(); ++pos)
        for (std::size_t i = 1; i < state.rows(); ++i)
          for (std::size_t j = 0; j < state.denoiser_count(); ++j)
            CHECK(state.value(pos, i, j) <= state.value(pos, i - 1, j));
    }
  }
}
