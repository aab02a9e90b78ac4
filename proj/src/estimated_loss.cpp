#include "sdude/estimated_loss.hpp"

namespace sdude {

EstimatedLossTable build_tables(const ChannelModel& channel, const LossMatrix& loss) {
  if (loss.clean_size() != channel.clean_size()) {
    throw ValidationError("loss rows (" + std::to_string(loss.clean_size()) +
                          ") do not match channel input alphabet (" +
                          std::to_string(channel.clean_size()) + ")");
  }
  EstimatedLossTable t;
  t.alphabets = {channel.clean_size(), channel.noisy_size(), loss.recon_size()};
  const DenoiserTable denoisers(t.alphabets.noisy_size, t.alphabets.recon_size);
  const auto n_clean = static_cast<Eigen::Index>(t.alphabets.clean_size);
  const auto n_den = static_cast<Eigen::Index>(denoisers.count());

  const Matrix& pi = channel.pi();
  t.rho.setZero(n_clean, n_den);
  for (Eigen::Index s = 0; s < n_den; ++s) {
    for (Eigen::Index x = 0; x < n_clean; ++x) {
      double acc = 0.0;
      for (Eigen::Index z = 0; z < pi.cols(); ++z) {
        acc += loss(static_cast<Symbol>(x),
                    denoisers.output(static_cast<std::size_t>(s), static_cast<Symbol>(z))) *
               pi(x, z);
      }
      t.rho(x, s) = acc;
    }
  }
  t.ell = channel.h_matrix() * t.rho;
  t.ell_max = t.ell.maxCoeff() - t.ell.minCoeff();
  return t;
}

std::size_t bayes_response(const Vector& zeta, const Matrix& loss_cols) {
  if (zeta.size() != loss_cols.rows()) {
    throw ValidationError("zeta length does not match loss rows");
  }
  std::size_t best = 0;
  double best_value = 0.0;
  for (Eigen::Index a = 0; a < loss_cols.cols(); ++a) {
    const double value = zeta.dot(loss_cols.col(a));
    if (a == 0 || value < best_value) {
      best = static_cast<std::size_t>(a);
      best_value = value;
    }
  }
  return best;
}

double bayes_envelope(const Vector& zeta, const Matrix& loss_cols) {
  return zeta.dot(loss_cols.col(static_cast<Eigen::Index>(bayes_response(zeta, loss_cols))));
}

Vector b_h_costs(const Vector& xi, Symbol z, const ChannelModel& channel,
                 const LossMatrix& loss) {
  if (xi.size() != static_cast<Eigen::Index>(channel.noisy_size())) {
    throw ValidationError("xi length does not match the noisy alphabet");
  }
  if (z >= channel.noisy_size()) throw RangeError("noisy symbol outside alphabet");
  if (loss.clean_size() != channel.clean_size()) {
    throw ValidationError("loss rows do not match channel input alphabet");
  }
  const Eigen::RowVectorXd weights = xi.transpose() * channel.h_matrix();  // 1 x |X|
  const auto pi_z = channel.pi().col(z);
  Vector costs(loss.lambda().cols());
  for (Eigen::Index xhat = 0; xhat < costs.size(); ++xhat) {
    costs(xhat) = weights.dot(loss.lambda().col(xhat).cwiseProduct(pi_z));
  }
  return costs;
}

Symbol b_h_rule(const Vector& xi, Symbol z, const ChannelModel& channel, const LossMatrix& loss) {
  const Vector costs = b_h_costs(xi, z, channel, loss);
  Eigen::Index best = 0;
  for (Eigen::Index xhat = 1; xhat < costs.size(); ++xhat) {
    if (costs(xhat) < costs(best)) best = xhat;
  }
  return static_cast<Symbol>(best);
}

}  // namespace sdude
