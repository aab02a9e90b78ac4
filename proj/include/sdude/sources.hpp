#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "json.hpp"
#include "sdude/core_model.hpp"

namespace sdude {

struct IidComponent {
  std::vector<double> distribution;
};

/// First-order Markov component. Without an explicit initial distribution the
/// chain starts from the stationary distribution of `transition`.
struct MarkovComponent {
  Matrix transition;
  std::optional<std::vector<double>> initial;
};

using ComponentSpec = std::variant<IidComponent, MarkovComponent>;

/// A piecewise stationary source with a deterministic switching schedule.
///
/// Block b covers 0-based indices [switch_times[b-1], switch_times[b]) with
/// the implicit bounds 0 and n, and follows component block_labels[b].
/// Adjacent blocks must use different components. By default every block is a
/// fresh, independent realization of its component; with `continuing_chain`
/// all components must be Markov and each block continues from the last state
/// of the previous block using its own transition matrix.
struct PiecewiseSourceSpec {
  std::vector<ComponentSpec> components;
  std::vector<std::size_t> switch_times;
  std::vector<std::size_t> block_labels;
  bool continuing_chain = false;

  std::size_t alphabet_size() const;
  /// Throws ValidationError describing the first violated constraint.
  void validate(std::size_t n) const;
};

SymbolSequence sample_piecewise(const PiecewiseSourceSpec& spec, std::size_t n,
                                std::uint64_t seed);

/// Passes x through a memoryless channel given by its transition matrix. Works
/// for any row-stochastic matrix, including ones with no right inverse.
SymbolSequence corrupt(const SymbolSequence& x, const Matrix& pi, std::uint64_t seed);
SymbolSequence corrupt(const SymbolSequence& x, const ChannelModel& channel, std::uint64_t seed);

/// Unique stationary distribution of a row-stochastic matrix. Throws
/// ValidationError when it is not unique.
std::vector<double> stationary_distribution(const Matrix& transition);

/// Binary symmetric Markov transition matrix with flip probability p.
Matrix symmetric_markov(double p);

/// 0^{n/2} 1^{n - n/2} as a two-block piecewise spec of constant components.
PiecewiseSourceSpec two_block_spec(std::size_t n);

/// A single binary symmetric chain whose flip probability changes from p1 to
/// p2 after `switch_at` symbols.
PiecewiseSourceSpec switching_markov_spec(double p1, double p2, std::size_t switch_at);

// JSON schema:
// {"components": [{"type": "iid", "distribution": [..]},
//                 {"type": "markov", "transition": [[..],..], "initial": [..]}],
//  "switch_times": [..], "block_labels": [..], "continuing_chain": false}
// A spec may give "switch_fractions" in (0,1) instead of "switch_times"; they
// are resolved to floor(f * n) when a length is supplied.
PiecewiseSourceSpec spec_from_json(const nlohmann::json& j,
                                   std::optional<std::size_t> length = std::nullopt);
nlohmann::json spec_to_json(const PiecewiseSourceSpec& spec);

}  // namespace sdude
