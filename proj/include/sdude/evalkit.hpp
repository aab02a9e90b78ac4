#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sdude/core_model.hpp"

namespace sdude {

/// Normalized loss (1/(to-from+1)) sum_{t=from..to} Lambda(x_t, xhat_t) over
/// 1-based inclusive positions. Throws RangeError unless 1 <= from <= to <= n.
double cumulative_loss(const SymbolSequence& x, const SymbolSequence& xhat, const LossMatrix& loss,
                       std::size_t from, std::size_t to);

/// One denoiser's result on one realization.
struct EvalRow {
  std::string denoiser;  // "noisy", "dude", "sdude", "fb-genie"
  std::uint64_t seed = 0;
  std::optional<std::size_t> k;
  std::optional<std::size_t> m;
  double loss_full = 0.0;
  std::optional<double> loss_interior;
  std::optional<double> estimated_loss;
  std::optional<double> genie_loss;  // D_{k,m} on the same interior
  std::optional<double> ber_ratio;   // loss_full / delta, Hamming experiments only
  std::optional<std::size_t> switches;
};

struct EvalReport {
  std::string experiment;
  std::size_t n = 0;
  std::string channel;
  std::string loss;
  nlohmann::json parameters = nlohmann::json::object();
  std::vector<EvalRow> rows;

  /// First row matching denoiser, seed and (k, m); nullptr when absent.
  const EvalRow* find(const std::string& denoiser, std::uint64_t seed,
                      std::optional<std::size_t> k = std::nullopt,
                      std::optional<std::size_t> m = std::nullopt) const;

  nlohmann::json to_json() const;
  std::string to_csv() const;
};

/// BER as a multiple of delta, rounded to four decimals; 0 when the BER is 0.
double ber_ratio(double ber, double delta);

/// Clean 0^{n/2} 1^{n-n/2} through BSC(delta) for each seed; reports the noisy
/// input, DUDE(k) and the (k,m) shifting denoiser with its genie target.
EvalReport run_two_block_experiment(std::size_t n, double delta, std::size_t k, std::size_t m,
                                    const std::vector<std::uint64_t>& seeds);

struct HmmExperimentConfig {
  std::size_t n = 1'000'000;
  double delta = 0.1;
  double p1 = 0.01;
  double p2 = 0.2;
  std::size_t switch_at = 500'000;
  std::vector<std::size_t> k_list = {0, 1, 2, 3, 4, 5, 6, 7};
  std::vector<std::size_t> m_list = {1};
  std::uint64_t seed = 1;
  bool with_genie = true;  // D_{k,m} per shifting row
};

/// Binary symmetric chain switching from p1 to p2 (one continuing chain)
/// observed through BSC(delta). Reports the genie-aided forward-backward MAP
/// denoiser, DUDE over k_list and the shifting denoiser over k_list x m_list.
EvalReport run_switching_hmm_experiment(const HmmExperimentConfig& config);

/// Produces the clean sequence of length n for a concentration sweep.
using CleanSource = std::function<SymbolSequence(std::size_t n)>;

struct ConcentrationRow {
  std::size_t n = 0;
  std::size_t trials = 0;
  double mean_gap = 0.0;
  double max_gap = 0.0;
  double min_gap = 0.0;
  double mean_sdude_loss = 0.0;
  double mean_genie_loss = 0.0;
};

struct ConcentrationTable {
  std::size_t k = 0;
  std::size_t m = 0;
  std::vector<ConcentrationRow> rows;

  nlohmann::json to_json() const;
  std::string to_csv() const;
};

/// Semi-stochastic sweep: for each n the clean sequence is fixed and `trials`
/// channel realizations are drawn. The gap is the interior true loss of the
/// (k,m) shifting denoiser minus D_{k,m}.
ConcentrationTable concentration_sweep(const CleanSource& source, const ChannelModel& channel,
                                       const LossMatrix& loss, std::size_t k, std::size_t m,
                                       const std::vector<std::size_t>& n_list, std::size_t trials,
                                       std::uint64_t seed);

}  // namespace sdude
