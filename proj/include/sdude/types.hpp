#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sdude {

using Symbol = std::uint32_t;

// Error hierarchy. Every failure surfaced by the library derives from Error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class RankError : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class SequenceTooShort : public Error {
 public:
  using Error::Error;
};

class TooLarge : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Sizes of the clean, noisy and reconstruction alphabets. Symbols of an
/// alphabet of size q are the integers 0..q-1.
struct Alphabets {
  std::size_t clean_size = 2;
  std::size_t noisy_size = 2;
  std::size_t recon_size = 2;

  void validate() const;
  bool operator==(const Alphabets&) const = default;
};

/// A finite-alphabet sequence whose symbols are checked against the alphabet
/// size on construction.
class SymbolSequence {
 public:
  SymbolSequence() = default;
  SymbolSequence(std::vector<Symbol> symbols, std::size_t alphabet_size);
  SymbolSequence(std::initializer_list<Symbol> symbols, std::size_t alphabet_size)
      : SymbolSequence(std::vector<Symbol>(symbols), alphabet_size) {}

  std::size_t size() const { return symbols_.size(); }
  bool empty() const { return symbols_.empty(); }
  std::size_t alphabet_size() const { return alphabet_size_; }

  // 0-based element access.
  Symbol operator[](std::size_t i) const { return symbols_[i]; }
  // 1-based access matching the t = 1..n indexing of the algorithms.
  Symbol at_position(std::size_t t) const;

  std::span<const Symbol> symbols() const { return symbols_; }
  const std::vector<Symbol>& vector() const { return symbols_; }

  bool operator==(const SymbolSequence&) const = default;

 private:
  std::vector<Symbol> symbols_;
  std::size_t alphabet_size_ = 1;
};

}  // namespace sdude
