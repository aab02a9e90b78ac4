#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "sdude/estimated_loss.hpp"
#include "sdude/genie.hpp"
#include "sdude/sources.hpp"

using namespace sdude;

TEST_CASE("noiseless observations cost nothing") {
  std::mt19937_64 rng(53);
  const SymbolSequence x = oracle::random_sequence(rng, 100, 2);
  for (std::size_t k = 0; k <= 2; ++k) {
    CHECK(genie_min_loss(x, x, k, 0, hamming_loss()).normalized_loss == 0.0);
  }
}

TEST_CASE("one switch recovers 0011 from 0101") {
  const SymbolSequence x({0, 0, 1, 1}, 2);
  const SymbolSequence z({0, 1, 0, 1}, 2);
  // Say-what-you-see is wrong at t = 2, 3; always0 then always1 is exact.
  CHECK(genie_min_loss(x, z, 0, 1, hamming_loss()).normalized_loss == 0.0);
  CHECK(genie_min_loss(x, z, 0, 0, hamming_loss()).normalized_loss == doctest::Approx(0.5));
}

TEST_CASE("two-block source has zero genie loss with one switch") {
  const std::size_t n = 2000;
  const SymbolSequence x = sample_piecewise(two_block_spec(n), n, 1);
  const SymbolSequence z = corrupt(x, bsc_channel(0.1), 1);
  const GenieResult g = genie_min_loss(x, z, 0, 1, hamming_loss());
  CHECK(g.normalized_loss == 0.0);
  CHECK(g.schedule.total_switches() == 1);
}

TEST_CASE("brute force on 000111") {
  const SymbolSequence z({0, 0, 0, 1, 1, 1}, 2);
  const EstimatedLossTable t = build_tables(bsc_channel(0.1), hamming_loss());
  CHECK(brute_force_min(z, 0, 1, t) == doctest::Approx(-0.75).epsilon(1e-12));
  // 4 constant schedules plus C(5,1) * 4 * 3 with one switch.
  CHECK(schedule_count(6, 1, 4) == 64);
  CHECK(schedule_count(1, 5, 4) == 4);
  CHECK(schedule_count(200, 200, 16) == std::numeric_limits<std::uint64_t>::max());
}

TEST_CASE("brute force refuses oversized enumerations") {
  std::mt19937_64 rng(59);
  const SymbolSequence z = oracle::random_sequence(rng, 40, 2);
  const EstimatedLossTable t = build_tables(bsc_channel(0.1), hamming_loss());
  CHECK_THROWS_AS(brute_force_min(z, 0, 10, t), TooLarge);
}

TEST_CASE("limits in m") {
  std::mt19937_64 rng(61);
  const auto loss = hamming_loss();
  for (int trial = 0; trial < 20; ++trial) {
    const SymbolSequence x = oracle::random_sequence(rng, 60, 2);
    const SymbolSequence z = corrupt(x, bsc_channel(0.2), 1000 + static_cast<std::uint64_t>(trial));
    const std::size_t k = trial % 2;
    const GenieResult wide = genie_min_loss(x, z, k, max_switch_budget(60, k), loss);
    // No switching equals the best fixed denoiser per context.
    const GenieResult fixed = genie_min_loss(x, z, k, 0, loss);
    const ContextPartition p = build_partition(z, k);
    double expected = 0.0;
    for (ContextId id : p.contexts()) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t s = 0; s < 4; ++s) {
        const auto d = denoiser_from_index(s, {2, 2, 2});
        double sum = 0.0;
        for (std::size_t t : p.occurrences(id))
          sum += loss(x.at_position(t), d.mapping[z.at_position(t)]);
        best = std::min(best, sum);
      }
      expected += best;
    }
    CHECK(fixed.cumulative_loss == doctest::Approx(expected).epsilon(1e-12));
    CHECK(wide.cumulative_loss >= 0.0);
    CHECK(wide.cumulative_loss <= fixed.cumulative_loss);
  }
}

TEST_CASE("enough switches reach the per-position minimum") {
  // Every step has a zero-loss denoiser (always say x_t). A context whose
  // clean symbols change c times needs c switches, so a budget above the
  // largest c gives zero loss.
  std::mt19937_64 rng(62);
  const auto loss = hamming_loss();
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Symbol> xs(80, 0);
    std::fill(xs.begin() + 20, xs.begin() + 45, 1);
    std::fill(xs.begin() + 60, xs.end(), 1);
    const SymbolSequence x(xs, 2);
    const SymbolSequence z = corrupt(x, bsc_channel(0.3), 3000 + static_cast<std::uint64_t>(trial));
    const std::size_t k = trial % 2;
    CHECK(genie_min_loss(x, z, k, 3, loss).cumulative_loss == 0.0);
  }
}

TEST_CASE("DP matches brute force in both loss modes") {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t q = 2;
    const std::size_t k = rng() % 2;
    const std::size_t n = 2 * k + 1 + rng() % 10;
    const ChannelModel ch = build_channel(oracle::random_channel(rng, q, q));
    const LossMatrix loss(oracle::random_loss(rng, q, q));
    const EstimatedLossTable t = build_tables(ch, loss);
    const SymbolSequence x = oracle::random_sequence(rng, n, q);
    const SymbolSequence z = oracle::random_sequence(rng, n, q);
    const std::size_t m = std::min<std::size_t>(rng() % 3, max_switch_budget(n, k));

    const double dp_est = forward_pass(z, k, m, t).minimum_total();
    CHECK(std::abs(dp_est - brute_force_min(z, k, m, t)) <= 1e-12 * std::max(1.0, std::abs(dp_est)));
    const double dp_true = genie_min_loss(x, z, k, m, loss).cumulative_loss;
    CHECK(std::abs(dp_true - brute_force_min(x, z, k, m, loss)) <= 1e-12 * std::max(1.0, dp_true));
  }
}

TEST_CASE("genie sandwich and context monotonicity") {
  std::mt19937_64 rng(71);
  const auto loss = hamming_loss();
  const auto ch = bsc_channel(0.15);
  for (int trial = 0; trial < 20; ++trial) {
    const SymbolSequence x = sample_piecewise(two_block_spec(400), 400, 1);
    const SymbolSequence z = corrupt(x, ch, 2000 + static_cast<std::uint64_t>(trial));
    const std::size_t k = 1 + trial % 2;
    // Over the interior of the larger k, a longer context can only help.
    for (std::size_t m : {0u, 1u, 3u}) {
      const GenieResult deep = genie_min_loss(x, z, k, m, loss);
      const std::vector<Symbol> xi(x.vector().begin() + static_cast<std::ptrdiff_t>(k),
                                   x.vector().end() - static_cast<std::ptrdiff_t>(k));
      const std::vector<Symbol> zi(z.vector().begin() + static_cast<std::ptrdiff_t>(k),
                                   z.vector().end() - static_cast<std::ptrdiff_t>(k));
      const GenieResult shallow = genie_min_loss(SymbolSequence(xi, 2), SymbolSequence(zi, 2), 0, m, loss);
      CHECK(shallow.cumulative_loss >= deep.cumulative_loss - 1e-12);
      // The shifting denoiser can never beat its own genie.
      const ShiftingResult r = sdude_denoise(z, k, m, ch, loss);
      double actual = 0.0;
      for (std::size_t t = k + 1; t <= 400 - k; ++t) actual += loss(x.at_position(t), r.output.at_position(t));
      CHECK(actual >= deep.cumulative_loss - 1e-12);
      // Estimated loss along the chosen schedule is no larger than along the genie schedule.
      const EstimatedLossTable t = build_tables(ch, loss);
      const StepLoss est = estimated_step_loss(t, z, k);
      CHECK(schedule_loss(r.schedule, est) <= schedule_loss(deep.schedule, est) + 1e-9);
    }
  }
}
