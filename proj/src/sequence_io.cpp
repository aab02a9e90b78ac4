#include "sdude/sequence_io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

namespace sdude {

SequenceFormat parse_format(std::string_view name) {
  if (name == "raw") return SequenceFormat::kRaw;
  if (name == "text") return SequenceFormat::kText;
  if (name == "pbm") return SequenceFormat::kPbm;
  throw ValidationError("unknown sequence format '" + std::string(name) + "'");
}

namespace {

class PbmParser {
 public:
  explicit PbmParser(std::string_view bytes) : bytes_(bytes) {}

  LoadedSequence parse() {
    if (bytes_.size() < 2 || bytes_[0] != 'P' || (bytes_[1] != '1' && bytes_[1] != '4')) {
      throw ValidationError("not a P1/P4 PBM file");
    }
    PbmHeader header;
    header.ascii = bytes_[1] == '1';
    pos_ = 2;
    header.width = header_number();
    header.height = header_number();
    if (header.width == 0 || header.height == 0) throw ValidationError("PBM has zero size");

    LoadedSequence out;
    out.symbols.resize(header.width * header.height);
    if (header.ascii) {
      for (auto& s : out.symbols) {
        skip_space_and_comments();
        if (pos_ >= bytes_.size()) throw ValidationError("PBM raster truncated");
        const char c = bytes_[pos_++];
        if (c != '0' && c != '1') throw ValidationError("bad P1 pixel character");
        s = static_cast<Symbol>(c - '0');
      }
    } else {
      // Exactly one whitespace byte separates the header from the raster.
      if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
        throw ValidationError("PBM header not terminated by whitespace");
      }
      ++pos_;
      const std::size_t row_bytes = (header.width + 7) / 8;
      if (bytes_.size() - pos_ < row_bytes * header.height) {
        throw ValidationError("PBM raster truncated");
      }
      for (std::size_t r = 0; r < header.height; ++r) {
        const auto* row = reinterpret_cast<const unsigned char*>(bytes_.data() + pos_ + r * row_bytes);
        for (std::size_t c = 0; c < header.width; ++c) {
          out.symbols[r * header.width + c] = (row[c / 8] >> (7 - c % 8)) & 1u;
        }
      }
    }
    out.pbm = header;
    return out;
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const char c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::size_t header_number() {
    skip_space_and_comments();
    const std::size_t begin = pos_;
    while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) ++pos_;
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(bytes_.data() + begin, bytes_.data() + pos_, value);
    if (begin == pos_ || ec != std::errc()) throw ValidationError("bad PBM header");
    return value;
  }

  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

LoadedSequence decode_sequence(std::string_view bytes, SequenceFormat format) {
  LoadedSequence out;
  switch (format) {
    case SequenceFormat::kRaw:
      out.symbols.reserve(bytes.size());
      for (char c : bytes) out.symbols.push_back(static_cast<unsigned char>(c));
      return out;
    case SequenceFormat::kText: {
      std::size_t pos = 0;
      while (pos < bytes.size()) {
        while (pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
        if (pos == bytes.size()) break;
        Symbol value = 0;
        const auto [ptr, ec] = std::from_chars(bytes.data() + pos, bytes.data() + bytes.size(), value);
        if (ec != std::errc() ||
            (ptr != bytes.data() + bytes.size() && !std::isspace(static_cast<unsigned char>(*ptr)))) {
          throw ValidationError("text sequence must hold whitespace-separated integers");
        }
        out.symbols.push_back(value);
        pos = static_cast<std::size_t>(ptr - bytes.data());
      }
      return out;
    }
    case SequenceFormat::kPbm:
      return PbmParser(bytes).parse();
  }
  throw ValidationError("unknown format");
}

std::string encode_sequence(std::span<const Symbol> symbols, SequenceFormat format,
                            const std::optional<PbmHeader>& pbm) {
  std::string out;
  switch (format) {
    case SequenceFormat::kRaw:
      out.reserve(symbols.size());
      for (Symbol s : symbols) {
        if (s > 255) throw ValidationError("raw format holds symbols up to 255");
        out.push_back(static_cast<char>(s));
      }
      return out;
    case SequenceFormat::kText: {
      std::ostringstream os;
      for (std::size_t i = 0; i < symbols.size(); ++i) os << (i ? " " : "") << symbols[i];
      os << '\n';
      return os.str();
    }
    case SequenceFormat::kPbm: {
      if (!pbm) throw ValidationError("PBM output needs image dimensions");
      if (pbm->width * pbm->height != symbols.size()) {
        throw ValidationError("PBM dimensions do not match the sequence length");
      }
      for (Symbol s : symbols) {
        if (s > 1) throw ValidationError("PBM holds binary symbols only");
      }
      std::ostringstream os;
      os << (pbm->ascii ? "P1\n" : "P4\n") << pbm->width << ' ' << pbm->height << '\n';
      out = os.str();
      if (pbm->ascii) {
        for (std::size_t r = 0; r < pbm->height; ++r) {
          for (std::size_t c = 0; c < pbm->width; ++c) {
            out.push_back(symbols[r * pbm->width + c] ? '1' : '0');
            // Plain PBM lines should stay under 70 characters.
            if ((c + 1) % 64 == 0 && c + 1 < pbm->width) out.push_back('\n');
          }
          out.push_back('\n');
        }
      } else {
        const std::size_t row_bytes = (pbm->width + 7) / 8;
        for (std::size_t r = 0; r < pbm->height; ++r) {
          std::string row(row_bytes, '\0');
          for (std::size_t c = 0; c < pbm->width; ++c) {
            if (symbols[r * pbm->width + c]) row[c / 8] |= static_cast<char>(0x80u >> (c % 8));
          }
          out += row;
        }
      }
      return out;
    }
  }
  throw ValidationError("unknown format");
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("error reading " + path.string());
  return buffer.str();
}

LoadedSequence read_sequence(const std::filesystem::path& path, SequenceFormat format) {
  return decode_sequence(read_file(path), format);
}

void write_file_atomic(const std::filesystem::path& path, std::string_view bytes) {
  const std::filesystem::path tmp =
      path.string() + ".tmp." + std::to_string(static_cast<long>(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot create " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw IoError("error writing " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    throw IoError("cannot move output into place at " + path.string() + ": " + ec.message());
  }
}

}  // namespace sdude
