#pragma once

#include <Eigen/Dense>

#include <cstddef>

#include "sdude/core_model.hpp"

namespace sdude {

/// Unbiased estimated losses for every (noisy symbol, single-symbol denoiser)
/// pair.
///
/// rho(x, s) is the expected true loss of denoiser s when the clean symbol is
/// x, and ell(z, s) = h(z)^T rho(s). Since Pi H = I, the expectation of
/// ell(Z, s) given X = x is rho(x, s), so ell can stand in for the
/// unobservable loss Lambda(x, s(z)).
struct EstimatedLossTable {
  Alphabets alphabets;
  Matrix ell;  // |Z| x N
  Matrix rho;  // |X| x N
  double ell_max = 0.0;  // max entry minus min entry

  std::size_t denoiser_count() const { return static_cast<std::size_t>(ell.cols()); }
  double operator()(Symbol z, std::size_t s) const { return ell(z, static_cast<Eigen::Index>(s)); }
};

/// Throws ValidationError when the channel and loss alphabets disagree.
EstimatedLossTable build_tables(const ChannelModel& channel, const LossMatrix& loss);

/// argmin_a zeta^T loss.col(a); the smallest index wins ties.
std::size_t bayes_response(const Vector& zeta, const Matrix& loss_cols);

/// min_a zeta^T loss.col(a).
double bayes_envelope(const Vector& zeta, const Matrix& loss_cols);

/// argmin over xhat of xi^T H [lambda_xhat (.) pi_z], the DUDE decision rule
/// for noisy symbol z given a (possibly unnormalized) vector xi over the noisy
/// alphabet. Smallest xhat wins ties.
Symbol b_h_rule(const Vector& xi, Symbol z, const ChannelModel& channel, const LossMatrix& loss);

/// The per-symbol costs xi^T H [lambda_xhat (.) pi_z] for every xhat.
Vector b_h_costs(const Vector& xi, Symbol z, const ChannelModel& channel, const LossMatrix& loss);

}  // namespace sdude
