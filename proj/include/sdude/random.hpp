#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace sdude {

/// Counter-based SplitMix64 generator.
///
/// Draw i of stream (seed, stream) is mix64(key + (i + 1) * 0x9E3779B97F4A7C15)
/// with key = mix64(seed ^ mix64(stream)), where mix64 is the SplitMix64
/// finalizer. Output depends only on (seed, stream, i), so independent streams
/// are obtained by picking distinct stream numbers and results are identical on
/// every platform.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next();
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();
  /// Index drawn from a probability vector by inverse CDF; the last index with
  /// positive mass absorbs rounding.
  std::size_t categorical(std::span<const double> probabilities);

  std::uint64_t counter() const { return counter_; }

  static std::uint64_t mix64(std::uint64_t x);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace sdude
