#include "sdude/evalkit.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>

#include "sdude/dude.hpp"
#include "sdude/genie.hpp"
#include "sdude/hmm_baseline.hpp"
#include "sdude/numeric.hpp"
#include "sdude/random.hpp"
#include "sdude/shifting.hpp"
#include "sdude/sources.hpp"

namespace sdude {

namespace {

// Runs fn(0..count-1) on a small worker pool. Results must be written to
// per-index slots so the outcome does not depend on scheduling.
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const std::size_t workers =
      std::min<std::size_t>(count, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string format_ratio(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

template <class T, class F>
std::string optional_cell(const std::optional<T>& v, F&& fmt) {
  return v ? fmt(*v) : std::string();
}

double interior_loss(const SymbolSequence& x, const SymbolSequence& xhat, const LossMatrix& loss,
                     std::size_t k) {
  return cumulative_loss(x, xhat, loss, k + 1, x.size() - k);
}

std::string delta_descriptor(double delta) { return "bsc:" + format_double(delta); }

EvalRow make_row(std::string denoiser, std::uint64_t seed, double loss_full, double delta) {
  EvalRow row;
  row.denoiser = std::move(denoiser);
  row.seed = seed;
  row.loss_full = loss_full;
  row.ber_ratio = ber_ratio(loss_full, delta);
  return row;
}

}  // namespace

double cumulative_loss(const SymbolSequence& x, const SymbolSequence& xhat, const LossMatrix& loss,
                       std::size_t from, std::size_t to) {
  if (x.size() != xhat.size()) throw ValidationError("clean and reconstruction lengths differ");
  if (from < 1 || from > to || to > x.size()) {
    throw RangeError("loss range [" + std::to_string(from) + "," + std::to_string(to) +
                     "] outside 1.." + std::to_string(x.size()));
  }
  if (x.alphabet_size() > loss.clean_size() || xhat.alphabet_size() > loss.recon_size()) {
    throw ValidationError("sequence alphabets exceed the loss matrix");
  }
  CompensatedSum total;
  for (std::size_t t = from; t <= to; ++t) total.add(loss(x[t - 1], xhat[t - 1]));
  return total.value() / static_cast<double>(to - from + 1);
}

double ber_ratio(double ber, double delta) {
  if (ber == 0.0) return 0.0;
  return std::round(ber / delta * 1e4) / 1e4;
}

const EvalRow* EvalReport::find(const std::string& denoiser, std::uint64_t seed,
                                std::optional<std::size_t> k, std::optional<std::size_t> m) const {
  for (const auto& row : rows) {
    if (row.denoiser == denoiser && row.seed == seed && (!k || row.k == k) && (!m || row.m == m)) {
      return &row;
    }
  }
  return nullptr;
}

nlohmann::json EvalReport::to_json() const {
  nlohmann::json j;
  j["experiment"] = experiment;
  j["n"] = n;
  j["channel"] = channel;
  j["loss"] = loss;
  j["parameters"] = parameters;
  j["rows"] = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json row = {{"denoiser", r.denoiser}, {"seed", r.seed}, {"loss_full", r.loss_full}};
    if (r.k) row["k"] = *r.k;
    if (r.m) row["m"] = *r.m;
    if (r.loss_interior) row["loss_interior"] = *r.loss_interior;
    if (r.estimated_loss) row["estimated_loss"] = *r.estimated_loss;
    if (r.genie_loss) row["genie_loss"] = *r.genie_loss;
    if (r.ber_ratio) row["ber_ratio"] = *r.ber_ratio;
    if (r.switches) row["switches"] = *r.switches;
    j["rows"].push_back(row);
  }
  return j;
}

std::string EvalReport::to_csv() const {
  std::ostringstream os;
  os << "experiment,denoiser,seed,k,m,loss_full,loss_interior,estimated_loss,genie_loss,ber_ratio,"
        "switches\n";
  auto size_cell = [](std::size_t v) { return std::to_string(v); };
  for (const auto& r : rows) {
    os << experiment << ',' << r.denoiser << ',' << r.seed << ',' << optional_cell(r.k, size_cell)
       << ',' << optional_cell(r.m, size_cell) << ',' << format_double(r.loss_full) << ','
       << optional_cell(r.loss_interior, format_double) << ','
       << optional_cell(r.estimated_loss, format_double) << ','
       << optional_cell(r.genie_loss, format_double) << ','
       << optional_cell(r.ber_ratio, format_ratio) << ','
       << optional_cell(r.switches, size_cell) << '\n';
  }
  return os.str();
}

EvalReport run_two_block_experiment(std::size_t n, double delta, std::size_t k, std::size_t m,
                                    const std::vector<std::uint64_t>& seeds) {
  const ChannelModel channel = bsc_channel(delta);
  const LossMatrix loss = hamming_loss(2);
  const SymbolSequence x = sample_piecewise(two_block_spec(n), n, 0);

  EvalReport report;
  report.experiment = "two-block";
  report.n = n;
  report.channel = delta_descriptor(delta);
  report.loss = "hamming";
  report.parameters = {{"delta", delta}, {"k", k}, {"m", m}, {"seeds", seeds}};

  std::vector<std::vector<EvalRow>> per_seed(seeds.size());
  parallel_for(seeds.size(), [&](std::size_t i) {
    const std::uint64_t seed = seeds[i];
    const SymbolSequence z = corrupt(x, channel, seed);
    std::vector<EvalRow>& rows = per_seed[i];

    const double noisy = cumulative_loss(x, z, loss, 1, n);
    rows.push_back(make_row("noisy", seed, noisy, delta));

    const SymbolSequence dude = dude_denoise(z, k, channel, loss);
    const double dude_full = cumulative_loss(x, dude, loss, 1, n);
    EvalRow dude_row = make_row("dude", seed, dude_full, delta);
    dude_row.k = k;
    dude_row.m = 0;
    dude_row.loss_interior = interior_loss(x, dude, loss, k);
    dude_row.genie_loss = genie_min_loss(x, z, k, 0, loss).normalized_loss;
    rows.push_back(dude_row);

    const ShiftingResult shifted = sdude_denoise(z, k, m, channel, loss);
    const double full = cumulative_loss(x, shifted.output, loss, 1, n);
    EvalRow row = make_row("sdude", seed, full, delta);
    row.k = k;
    row.m = m;
    row.loss_interior = interior_loss(x, shifted.output, loss, k);
    row.estimated_loss = shifted.estimated_loss;
    row.genie_loss = genie_min_loss(x, z, k, m, loss).normalized_loss;
    row.switches = shifted.schedule.total_switches();
    rows.push_back(row);
  });
  for (auto& rows : per_seed) {
    report.rows.insert(report.rows.end(), rows.begin(), rows.end());
  }
  return report;
}

EvalReport run_switching_hmm_experiment(const HmmExperimentConfig& config) {
  const ChannelModel channel = bsc_channel(config.delta);
  const LossMatrix loss = hamming_loss(2);
  const std::size_t n = config.n;
  const SymbolSequence x =
      sample_piecewise(switching_markov_spec(config.p1, config.p2, config.switch_at), n, config.seed);
  const SymbolSequence z = corrupt(x, channel, config.seed);

  EvalReport report;
  report.experiment = "switching-hmm";
  report.n = n;
  report.channel = delta_descriptor(config.delta);
  report.loss = "hamming";
  report.parameters = {{"delta", config.delta},     {"p1", config.p1},
                       {"p2", config.p2},           {"switch_at", config.switch_at},
                       {"k_list", config.k_list},   {"m_list", config.m_list},
                       {"seed", config.seed}};
  const double delta = config.delta;

  const double noisy = cumulative_loss(x, z, loss, 1, n);
  report.rows.push_back(make_row("noisy", config.seed, noisy, delta));

  const std::vector<MarkovSegment> segments = {
      {1, config.switch_at, symmetric_markov(config.p1)},
      {config.switch_at + 1, n, symmetric_markov(config.p2)}};
  const SymbolSequence fb = map_denoise(fb_posteriors(z, segments, channel), loss);
  const double fb_loss = cumulative_loss(x, fb, loss, 1, n);
  report.rows.push_back(make_row("fb-genie", config.seed, fb_loss, delta));

  for (std::size_t k : config.k_list) {
    const SymbolSequence dude = dude_denoise(z, k, channel, loss);
    const double full = cumulative_loss(x, dude, loss, 1, n);
    EvalRow row = make_row("dude", config.seed, full, delta);
    row.k = k;
    row.m = 0;
    row.loss_interior = interior_loss(x, dude, loss, k);
    report.rows.push_back(row);
  }
  for (std::size_t k : config.k_list) {
    for (std::size_t m : config.m_list) {
      const ShiftingResult shifted = sdude_denoise(z, k, m, channel, loss);
      const double full = cumulative_loss(x, shifted.output, loss, 1, n);
      EvalRow row = make_row("sdude", config.seed, full, delta);
      row.k = k;
      row.m = m;
      row.loss_interior = interior_loss(x, shifted.output, loss, k);
      row.estimated_loss = shifted.estimated_loss;
      if (config.with_genie) row.genie_loss = genie_min_loss(x, z, k, m, loss).normalized_loss;
      row.switches = shifted.schedule.total_switches();
      report.rows.push_back(row);
    }
  }
  return report;
}

nlohmann::json ConcentrationTable::to_json() const {
  nlohmann::json j = {{"k", k}, {"m", m}, {"rows", nlohmann::json::array()}};
  for (const auto& r : rows) {
    j["rows"].push_back({{"n", r.n},
                         {"trials", r.trials},
                         {"mean_gap", r.mean_gap},
                         {"max_gap", r.max_gap},
                         {"min_gap", r.min_gap},
                         {"mean_sdude_loss", r.mean_sdude_loss},
                         {"mean_genie_loss", r.mean_genie_loss}});
  }
  return j;
}

std::string ConcentrationTable::to_csv() const {
  std::ostringstream os;
  os << "n,k,m,trials,mean_gap,max_gap,min_gap,mean_sdude_loss,mean_genie_loss\n";
  for (const auto& r : rows) {
    os << r.n << ',' << k << ',' << m << ',' << r.trials << ',' << format_double(r.mean_gap) << ','
       << format_double(r.max_gap) << ',' << format_double(r.min_gap) << ','
       << format_double(r.mean_sdude_loss) << ',' << format_double(r.mean_genie_loss) << '\n';
  }
  return os.str();
}

ConcentrationTable concentration_sweep(const CleanSource& source, const ChannelModel& channel,
                                       const LossMatrix& loss, std::size_t k, std::size_t m,
                                       const std::vector<std::size_t>& n_list, std::size_t trials,
                                       std::uint64_t seed) {
  if (trials == 0) throw ValidationError("concentration sweep needs at least one trial");
  ConcentrationTable table;
  table.k = k;
  table.m = m;
  for (std::size_t n : n_list) {
    const SymbolSequence x = source(n);
    if (x.size() != n) throw ValidationError("clean source returned the wrong length");
    std::vector<double> shifted_loss(trials);
    std::vector<double> genie(trials);
    parallel_for(trials, [&](std::size_t i) {
      const std::uint64_t trial_seed = CounterRng::mix64(seed ^ CounterRng::mix64(n)) + i;
      const SymbolSequence z = corrupt(x, channel, trial_seed);
      const ShiftingResult shifted = sdude_denoise(z, k, m, channel, loss);
      shifted_loss[i] = interior_loss(x, shifted.output, loss, k);
      genie[i] = genie_min_loss(x, z, k, m, loss).normalized_loss;
    });
    ConcentrationRow row;
    row.n = n;
    row.trials = trials;
    row.max_gap = -std::numeric_limits<double>::infinity();
    row.min_gap = std::numeric_limits<double>::infinity();
    CompensatedSum gap_sum, shifted_sum, genie_sum;
    for (std::size_t i = 0; i < trials; ++i) {
      const double gap = shifted_loss[i] - genie[i];
      gap_sum.add(gap);
      shifted_sum.add(shifted_loss[i]);
      genie_sum.add(genie[i]);
      row.max_gap = std::max(row.max_gap, gap);
      row.min_gap = std::min(row.min_gap, gap);
    }
    const auto count = static_cast<double>(trials);
    row.mean_gap = gap_sum.value() / count;
    row.mean_sdude_loss = shifted_sum.value() / count;
    row.mean_genie_loss = genie_sum.value() / count;
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace sdude
