#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "sdude/types.hpp"

namespace sdude {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kValidationTolerance = 1e-9;

/// A discrete memoryless channel: the transition matrix Pi (clean x noisy,
/// row-stochastic, full row rank) together with a right inverse H such that
/// Pi * H = I.
class ChannelModel {
 public:
  const Matrix& pi() const { return pi_; }
  const Matrix& h_matrix() const { return h_; }
  std::size_t clean_size() const { return static_cast<std::size_t>(pi_.rows()); }
  std::size_t noisy_size() const { return static_cast<std::size_t>(pi_.cols()); }

  // Column of H as seen from noisy symbol z, i.e. the vector h(z).
  Eigen::Ref<const Eigen::RowVectorXd> h_of(Symbol z) const { return h_.row(z); }

 private:
  friend ChannelModel build_channel(const Matrix& pi);
  friend ChannelModel build_channel(const Matrix& pi, const Matrix& h);
  Matrix pi_;
  Matrix h_;
};

/// Builds a channel with the Moore-Penrose right inverse H = Pi^T (Pi Pi^T)^-1.
/// Throws ValidationError for non-stochastic input and RankError when Pi does
/// not have full row rank.
ChannelModel build_channel(const Matrix& pi);

/// Builds a channel with a caller-supplied right inverse; H is checked against
/// Pi * H = I but otherwise used as given.
ChannelModel build_channel(const Matrix& pi, const Matrix& h);

ChannelModel identity_channel(std::size_t alphabet_size = 2);
ChannelModel bsc_channel(double delta);

/// Nonnegative loss Lambda(x, xhat), clean x reconstruction.
class LossMatrix {
 public:
  explicit LossMatrix(Matrix lambda);

  const Matrix& lambda() const { return lambda_; }
  double lambda_max() const { return lambda_max_; }
  double operator()(Symbol x, Symbol xhat) const { return lambda_(x, xhat); }
  std::size_t clean_size() const { return static_cast<std::size_t>(lambda_.rows()); }
  std::size_t recon_size() const { return static_cast<std::size_t>(lambda_.cols()); }

 private:
  Matrix lambda_;
  double lambda_max_ = 0.0;
};

LossMatrix hamming_loss(std::size_t alphabet_size = 2);

/// Upper bound on |recon|^|noisy| accepted for denoiser enumeration.
inline constexpr std::uint64_t kMaxDenoiserCount = std::uint64_t{1} << 20;

/// Number of mappings noisy -> recon, |recon|^|noisy|. Throws TooLarge when the
/// count exceeds kMaxDenoiserCount.
std::size_t denoiser_count(const Alphabets& alphabets);

/// A single-symbol denoiser: a mapping from noisy symbols to reconstruction
/// symbols, canonically indexed by index = sum_z mapping[z] * |recon|^z.
struct SingleSymbolDenoiser {
  std::size_t index = 0;
  std::vector<Symbol> mapping;

  bool operator==(const SingleSymbolDenoiser&) const = default;
};

SingleSymbolDenoiser denoiser_from_index(std::size_t index, const Alphabets& alphabets);
std::size_t denoiser_index(std::span<const Symbol> mapping, std::size_t recon_size);
Symbol apply_denoiser(const SingleSymbolDenoiser& s, Symbol z);

/// Flat table of every single-symbol denoiser for a pair of alphabets,
/// `output(s, z)` giving s(z). Built once and shared by the loss tables and the
/// denoisers.
class DenoiserTable {
 public:
  DenoiserTable(std::size_t noisy_size, std::size_t recon_size);

  std::size_t count() const { return count_; }
  std::size_t noisy_size() const { return noisy_size_; }
  std::size_t recon_size() const { return recon_size_; }
  Symbol output(std::size_t s, Symbol z) const { return table_[s * noisy_size_ + z]; }

 private:
  std::size_t noisy_size_;
  std::size_t recon_size_;
  std::size_t count_;
  std::vector<Symbol> table_;
};

// Plain-text matrix files: "rows cols" on the first line followed by
// row-major whitespace-separated decimals.
Matrix read_matrix_file(const std::filesystem::path& path);
Matrix parse_matrix_text(std::string_view text);

/// "bsc:<delta>", "identity" / "identity:<q>", or a path to a matrix file.
ChannelModel channel_from_descriptor(std::string_view descriptor);
/// "hamming" / "hamming:<q>", or a path to a matrix file.
LossMatrix loss_from_descriptor(std::string_view descriptor);

}  // namespace sdude
