#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sdude/core_model.hpp"

namespace sdude {

/// A stretch of the hidden chain, 1-based positions start..end inclusive,
/// governed by one transition matrix.
struct MarkovSegment {
  std::size_t start = 1;
  std::size_t end = 1;
  Matrix transition;
};

/// Which segment's matrix drives the step t -> t+1 when t+1 opens a new
/// segment. kIncoming (the default) uses the segment containing t+1.
enum class SwitchConvention { kIncoming, kOutgoing };

/// Row-major n x |X| table of posterior probabilities P(X_t = x | z^n).
class Posteriors {
 public:
  Posteriors(std::size_t length, std::size_t alphabet_size)
      : length_(length), alphabet_size_(alphabet_size), data_(length * alphabet_size, 0.0) {}

  std::size_t size() const { return length_; }
  std::size_t alphabet_size() const { return alphabet_size_; }
  // 0-based row.
  std::span<double> row(std::size_t i) { return {data_.data() + i * alphabet_size_, alphabet_size_}; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * alphabet_size_, alphabet_size_};
  }

 private:
  std::size_t length_;
  std::size_t alphabet_size_;
  std::vector<double> data_;
};

/// Genie-aided forward-backward smoothing for a hidden Markov chain with
/// piecewise-constant transition matrices observed through a memoryless
/// channel. The chain starts in the stationary distribution of the first
/// segment. Throws ValidationError unless the segments tile 1..n.
Posteriors fb_posteriors(const SymbolSequence& z, const std::vector<MarkovSegment>& segments,
                         const Matrix& pi, SwitchConvention convention = SwitchConvention::kIncoming);
Posteriors fb_posteriors(const SymbolSequence& z, const std::vector<MarkovSegment>& segments,
                         const ChannelModel& channel,
                         SwitchConvention convention = SwitchConvention::kIncoming);

/// Per-position Bayes response to the posterior; the MAP symbol under Hamming
/// loss.
SymbolSequence map_denoise(const Posteriors& posteriors, const LossMatrix& loss);

}  // namespace sdude
