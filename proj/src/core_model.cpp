#include "sdude/core_model.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace sdude {

void Alphabets::validate() const {
  if (clean_size == 0 || noisy_size == 0 || recon_size == 0) {
    throw ValidationError("alphabet sizes must be positive");
  }
}

SymbolSequence::SymbolSequence(std::vector<Symbol> symbols, std::size_t alphabet_size)
    : symbols_(std::move(symbols)), alphabet_size_(alphabet_size) {
  if (alphabet_size_ == 0) {
    throw ValidationError("alphabet size must be positive");
  }
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (symbols_[i] >= alphabet_size_) {
      throw ValidationError("symbol " + std::to_string(symbols_[i]) + " at index " +
                            std::to_string(i) + " outside alphabet of size " +
                            std::to_string(alphabet_size_));
    }
  }
}

Symbol SymbolSequence::at_position(std::size_t t) const {
  if (t == 0 || t > symbols_.size()) {
    throw RangeError("position " + std::to_string(t) + " outside 1.." +
                     std::to_string(symbols_.size()));
  }
  return symbols_[t - 1];
}

namespace {

void validate_stochastic(const Matrix& pi) {
  if (pi.rows() == 0 || pi.cols() == 0) {
    throw ValidationError("channel matrix is empty");
  }
  for (Eigen::Index x = 0; x < pi.rows(); ++x) {
    double sum = 0.0;
    for (Eigen::Index z = 0; z < pi.cols(); ++z) {
      const double p = pi(x, z);
      if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
        throw ValidationError("channel entry (" + std::to_string(x) + "," + std::to_string(z) +
                              ") not a probability");
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > kValidationTolerance) {
      throw ValidationError("channel row " + std::to_string(x) + " sums to " +
                            std::to_string(sum));
    }
  }
}

void validate_right_inverse(const Matrix& pi, const Matrix& h) {
  if (h.rows() != pi.cols() || h.cols() != pi.rows()) {
    throw ValidationError("H must be |Z| x |X|");
  }
  const Matrix residual = pi * h - Matrix::Identity(pi.rows(), pi.rows());
  if (residual.cwiseAbs().maxCoeff() > kValidationTolerance) {
    throw ValidationError("Pi * H differs from the identity");
  }
}

}  // namespace

ChannelModel build_channel(const Matrix& pi) {
  validate_stochastic(pi);
  if (pi.cols() < pi.rows()) {
    throw RankError("channel has fewer outputs than inputs; no right inverse exists");
  }
  const Matrix gram = pi * pi.transpose();
  Eigen::FullPivLU<Matrix> lu(gram);
  lu.setThreshold(1e-12);
  if (lu.rank() < pi.rows()) {
    throw RankError("channel matrix is not of full row rank");
  }
  ChannelModel channel;
  channel.pi_ = pi;
  channel.h_ = pi.transpose() * lu.inverse();
  const Matrix residual = pi * channel.h_ - Matrix::Identity(pi.rows(), pi.rows());
  if (residual.cwiseAbs().maxCoeff() > kValidationTolerance) {
    throw RankError("channel matrix is too close to rank-deficient for a stable right inverse");
  }
  return channel;
}

ChannelModel build_channel(const Matrix& pi, const Matrix& h) {
  validate_stochastic(pi);
  validate_right_inverse(pi, h);
  ChannelModel channel;
  channel.pi_ = pi;
  channel.h_ = h;
  return channel;
}

ChannelModel identity_channel(std::size_t alphabet_size) {
  if (alphabet_size == 0) throw ValidationError("alphabet size must be positive");
  const auto q = static_cast<Eigen::Index>(alphabet_size);
  return build_channel(Matrix::Identity(q, q));
}

ChannelModel bsc_channel(double delta) {
  if (!(delta >= 0.0 && delta <= 1.0)) {
    throw ValidationError("crossover probability must lie in [0,1]");
  }
  Matrix pi(2, 2);
  pi << 1.0 - delta, delta, delta, 1.0 - delta;
  return build_channel(pi);
}

LossMatrix::LossMatrix(Matrix lambda) : lambda_(std::move(lambda)) {
  if (lambda_.rows() == 0 || lambda_.cols() == 0) {
    throw ValidationError("loss matrix is empty");
  }
  for (Eigen::Index i = 0; i < lambda_.size(); ++i) {
    const double v = lambda_.data()[i];
    if (!std::isfinite(v) || v < 0.0) {
      throw ValidationError("loss entries must be finite and nonnegative");
    }
  }
  lambda_max_ = lambda_.maxCoeff();
}

LossMatrix hamming_loss(std::size_t alphabet_size) {
  if (alphabet_size == 0) throw ValidationError("alphabet size must be positive");
  const auto q = static_cast<Eigen::Index>(alphabet_size);
  return LossMatrix(Matrix::Ones(q, q) - Matrix::Identity(q, q));
}

std::size_t denoiser_count(const Alphabets& alphabets) {
  alphabets.validate();
  std::uint64_t count = 1;
  for (std::size_t z = 0; z < alphabets.noisy_size; ++z) {
    count *= alphabets.recon_size;
    if (count > kMaxDenoiserCount) {
      throw TooLarge("|recon|^|noisy| exceeds the supported denoiser count");
    }
  }
  return static_cast<std::size_t>(count);
}

SingleSymbolDenoiser denoiser_from_index(std::size_t index, const Alphabets& alphabets) {
  const std::size_t count = denoiser_count(alphabets);
  if (index >= count) {
    throw RangeError("denoiser index " + std::to_string(index) + " outside 0.." +
                     std::to_string(count - 1));
  }
  SingleSymbolDenoiser s;
  s.index = index;
  s.mapping.resize(alphabets.noisy_size);
  std::size_t rest = index;
  for (std::size_t z = 0; z < alphabets.noisy_size; ++z) {
    s.mapping[z] = static_cast<Symbol>(rest % alphabets.recon_size);
    rest /= alphabets.recon_size;
  }
  return s;
}

std::size_t denoiser_index(std::span<const Symbol> mapping, std::size_t recon_size) {
  std::size_t index = 0;
  for (std::size_t z = mapping.size(); z-- > 0;) {
    if (mapping[z] >= recon_size) throw RangeError("mapping entry outside recon alphabet");
    index = index * recon_size + mapping[z];
  }
  return index;
}

Symbol apply_denoiser(const SingleSymbolDenoiser& s, Symbol z) {
  if (z >= s.mapping.size()) {
    throw RangeError("noisy symbol " + std::to_string(z) + " outside denoiser domain");
  }
  return s.mapping[z];
}

DenoiserTable::DenoiserTable(std::size_t noisy_size, std::size_t recon_size)
    : noisy_size_(noisy_size),
      recon_size_(recon_size),
      count_(denoiser_count({1, noisy_size, recon_size})) {
  table_.resize(count_ * noisy_size_);
  for (std::size_t s = 0; s < count_; ++s) {
    std::size_t rest = s;
    for (std::size_t z = 0; z < noisy_size_; ++z) {
      table_[s * noisy_size_ + z] = static_cast<Symbol>(rest % recon_size_);
      rest /= recon_size_;
    }
  }
}

Matrix parse_matrix_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  long long rows = 0;
  long long cols = 0;
  if (!(in >> rows >> cols) || rows <= 0 || cols <= 0) {
    throw ValidationError("matrix header must be \"rows cols\" with positive sizes");
  }
  Matrix m(rows, cols);
  for (long long r = 0; r < rows; ++r) {
    for (long long c = 0; c < cols; ++c) {
      if (!(in >> m(r, c))) {
        throw ValidationError("matrix has fewer than rows*cols entries");
      }
    }
  }
  std::string trailing;
  if (in >> trailing) {
    throw ValidationError("unexpected trailing data in matrix text: " + trailing);
  }
  return m;
}

Matrix read_matrix_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open matrix file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_matrix_text(buffer.str());
}

namespace {

std::size_t parse_size_suffix(std::string_view text) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || value == 0) {
    throw ValidationError("bad alphabet size '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

ChannelModel channel_from_descriptor(std::string_view descriptor) {
  if (descriptor.starts_with("bsc:")) {
    const std::string value(descriptor.substr(4));
    std::size_t used = 0;
    double delta = 0.0;
    try {
      delta = std::stod(value, &used);
    } catch (const std::exception&) {
      throw ValidationError("bad crossover probability '" + value + "'");
    }
    if (used != value.size()) throw ValidationError("bad crossover probability '" + value + "'");
    return bsc_channel(delta);
  }
  if (descriptor == "identity") return identity_channel(2);
  if (descriptor.starts_with("identity:")) {
    return identity_channel(parse_size_suffix(descriptor.substr(9)));
  }
  return build_channel(read_matrix_file(std::filesystem::path(descriptor)));
}

LossMatrix loss_from_descriptor(std::string_view descriptor) {
  if (descriptor == "hamming") return hamming_loss(2);
  if (descriptor.starts_with("hamming:")) {
    return hamming_loss(parse_size_suffix(descriptor.substr(8)));
  }
  return LossMatrix(read_matrix_file(std::filesystem::path(descriptor)));
}

}  // namespace sdude
