#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>

#include "oracles.hpp"
#include "sdude/sources.hpp"

using namespace sdude;

namespace {
PiecewiseSourceSpec constant_spec(std::size_t symbol) {
  PiecewiseSourceSpec spec;
  std::vector<double> d(2, 0.0);
  d[symbol] = 1.0;
  spec.components = {IidComponent{d}};
  spec.block_labels = {0};
  return spec;
}

// Pearson statistic of a 2x2 table.
double chi_square(const std::array<std::array<double, 2>, 2>& t) {
  const double n = t[0][0] + t[0][1] + t[1][0] + t[1][1];
  double stat = 0.0;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const double e = (t[a][0] + t[a][1]) * (t[0][b] + t[1][b]) / n;
      stat += (t[a][b] - e) * (t[a][b] - e) / e;
    }
  }
  return stat;
}
}  // namespace

TEST_CASE("degenerate components") {
  const SymbolSequence x = sample_piecewise(constant_spec(1), 50, 9);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(x[i] == 1);

  const SymbolSequence two = sample_piecewise(two_block_spec(10), 10, 3);
  CHECK(two.vector() == std::vector<Symbol>{0, 0, 0, 0, 0, 1, 1, 1, 1, 1});
  const SymbolSequence odd = sample_piecewise(two_block_spec(7), 7, 3);
  CHECK(odd.vector() == std::vector<Symbol>{0, 0, 0, 1, 1, 1, 1});
}

TEST_CASE("sampling and corruption are deterministic in the seed") {
  const auto spec = switching_markov_spec(0.05, 0.3, 500);
  const SymbolSequence a = sample_piecewise(spec, 1000, 42);
  CHECK(a == sample_piecewise(spec, 1000, 42));
  CHECK(!(a == sample_piecewise(spec, 1000, 43)));
  const auto ch = bsc_channel(0.2);
  CHECK(corrupt(a, ch, 5) == corrupt(a, ch, 5));
  CHECK(!(corrupt(a, ch, 5) == corrupt(a, ch, 6)));
}

TEST_CASE("BSC flip rate") {
  const std::size_t n = 1'000'000;
  const SymbolSequence x = sample_piecewise(two_block_spec(n), n, 1);
  const SymbolSequence z = corrupt(x, bsc_channel(0.1), 77);
  std::size_t flips = 0;
  for (std::size_t i = 0; i < n; ++i) flips += x[i] != z[i];
  CHECK(std::abs(static_cast<double>(flips) / n - 0.1) < 0.001);
}

TEST_CASE("a useless channel decorrelates output from input") {
  Matrix half(2, 2);
  half << 0.5, 0.5, 0.5, 0.5;
  const std::size_t n = 200'000;
  PiecewiseSourceSpec spec;
  spec.components = {IidComponent{{0.5, 0.5}}};
  spec.block_labels = {0};
  const SymbolSequence x = sample_piecewise(spec, n, 4);
  const SymbolSequence z = corrupt(x, half, 8);
  std::array<std::array<double, 2>, 2> table{};
  for (std::size_t i = 0; i < n; ++i) table[x[i]][z[i]] += 1;
  CHECK(chi_square(table) < 10.83);
}

TEST_CASE("blocks with the same label are independent realizations") {
  PiecewiseSourceSpec spec;
  spec.components = {MarkovComponent{symmetric_markov(0.05), std::nullopt},
                     MarkovComponent{symmetric_markov(0.4), std::nullopt}};
  spec.switch_times = {10, 12};
  spec.block_labels = {0, 1, 0};
  // A sticky chain would make x_9 and x_12 strongly dependent if the third
  // block continued the first.
  std::array<std::array<double, 2>, 2> table{};
  for (std::uint64_t seed = 0; seed < 4000; ++seed) {
    const SymbolSequence x = sample_piecewise(spec, 20, seed);
    table[x[9]][x[12]] += 1;
  }
  CHECK(chi_square(table) < 6.635);

  // The continuing chain, in contrast, carries state across the boundary.
  PiecewiseSourceSpec chained = switching_markov_spec(0.05, 0.05 + 1e-3, 10);
  std::array<std::array<double, 2>, 2> carried{};
  for (std::uint64_t seed = 0; seed < 4000; ++seed) {
    const SymbolSequence x = sample_piecewise(chained, 20, seed);
    carried[x[9]][x[10]] += 1;
  }
  CHECK(chi_square(carried) > 100.0);
}

TEST_CASE("stationary distributions") {
  Matrix p(2, 2);
  p << 0.9, 0.1, 0.3, 0.7;
  const auto pi = stationary_distribution(p);
  CHECK(pi[0] == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(pi[1] == doctest::Approx(0.25).epsilon(1e-12));
  std::mt19937_64 rng(83);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix t = oracle::random_stochastic(rng, 3, 3);
    const auto a = stationary_distribution(t);
    const auto b = oracle::power_stationary(t);
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(a[i] - b[i]) < 1e-10);
  }
  CHECK_THROWS_AS(stationary_distribution(Matrix::Identity(2, 2)), ValidationError);

  // Empirical start distribution of a Markov block.
  PiecewiseSourceSpec spec;
  spec.components = {MarkovComponent{p, std::nullopt}};
  spec.block_labels = {0};
  double zeros = 0;
  for (std::uint64_t seed = 0; seed < 20000; ++seed) zeros += sample_piecewise(spec, 1, seed)[0] == 0;
  CHECK(std::abs(zeros / 20000 - 0.75) < 0.015);
}

TEST_CASE("spec validation") {
  auto spec = two_block_spec(100);
  CHECK_NOTHROW(spec.validate(100));
  CHECK_THROWS_AS(spec.validate(50), ValidationError);  // switch time beyond n

  auto same = spec;
  same.block_labels = {0, 0};
  CHECK_THROWS_AS(same.validate(100), ValidationError);

  auto unsorted = spec;
  unsorted.switch_times = {60, 40};
  unsorted.block_labels = {0, 1, 0};
  CHECK_THROWS_AS(unsorted.validate(100), ValidationError);

  auto bad_label = spec;
  bad_label.block_labels = {0, 2};
  CHECK_THROWS_AS(bad_label.validate(100), ValidationError);

  PiecewiseSourceSpec bad_dist;
  bad_dist.components = {IidComponent{{0.5, 0.6}}};
  bad_dist.block_labels = {0};
  CHECK_THROWS_AS(bad_dist.validate(10), ValidationError);

  auto mixed = spec;
  mixed.continuing_chain = true;
  CHECK_THROWS_AS(mixed.validate(100), ValidationError);
}

TEST_CASE("JSON round trip") {
  const auto spec = switching_markov_spec(0.01, 0.2, 300);
  const auto back = spec_from_json(spec_to_json(spec));
  CHECK(spec_to_json(back) == spec_to_json(spec));
  CHECK(sample_piecewise(back, 600, 3) == sample_piecewise(spec, 600, 3));

  const auto j = nlohmann::json::parse(R"({
    "components": [{"type": "iid", "distribution": [1, 0]},
                   {"type": "iid", "distribution": [0, 1]}],
    "switch_fractions": [0.25],
    "block_labels": [0, 1]})");
  const auto resolved = spec_from_json(j, 100);
  CHECK(resolved.switch_times == std::vector<std::size_t>{25});
  CHECK_THROWS_AS(spec_from_json(j), ValidationError);
  CHECK_THROWS_AS(spec_from_json(nlohmann::json::parse(R"({"components": [{"type": "x"}]})")),
                  ValidationError);
}
