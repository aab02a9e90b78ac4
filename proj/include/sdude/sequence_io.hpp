#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sdude/types.hpp"

namespace sdude {

enum class SequenceFormat { kRaw, kText, kPbm };

SequenceFormat parse_format(std::string_view name);

/// Geometry and encoding of a PBM bitmap (P1 ascii or P4 packed).
struct PbmHeader {
  std::size_t width = 0;
  std::size_t height = 0;
  bool ascii = false;
};

/// Symbols read from a file plus, for PBM input, the header needed to write
/// the result back in the same shape. PBM pixels are raster-scanned row-major
/// with 0 = white and 1 = black.
struct LoadedSequence {
  std::vector<Symbol> symbols;
  std::optional<PbmHeader> pbm;
};

LoadedSequence decode_sequence(std::string_view bytes, SequenceFormat format);
std::string encode_sequence(std::span<const Symbol> symbols, SequenceFormat format,
                            const std::optional<PbmHeader>& pbm = std::nullopt);

LoadedSequence read_sequence(const std::filesystem::path& path, SequenceFormat format);

std::string read_file(const std::filesystem::path& path);
/// Writes via a temporary file in the same directory and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

}  // namespace sdude
