#pragma once

// Test-only reference computations, written independently of the library's
// code paths.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "sdude/core_model.hpp"
#include "sdude/hmm_baseline.hpp"

namespace oracle {

using Dense = std::vector<std::vector<double>>;

// Gauss-Jordan inverse with partial pivoting.
inline Dense invert(Dense a) {
  const std::size_t n = a.size();
  Dense inv(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (std::abs(a[pivot][col]) < 1e-300) throw std::runtime_error("singular");
    std::swap(a[pivot], a[col]);
    std::swap(inv[pivot], inv[col]);
    const double d = a[col][col];
    for (std::size_t c = 0; c < n; ++c) {
      a[col][c] /= d;
      inv[col][c] /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a[r][col];
      for (std::size_t c = 0; c < n; ++c) {
        a[r][c] -= f * a[col][c];
        inv[r][c] -= f * inv[col][c];
      }
    }
  }
  return inv;
}

// Pi^T (Pi Pi^T)^-1 with plain loops.
inline Dense moore_penrose_right_inverse(const Dense& pi) {
  const std::size_t rows = pi.size();
  const std::size_t cols = pi[0].size();
  Dense gram(rows, std::vector<double>(rows, 0.0));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < rows; ++j)
      for (std::size_t c = 0; c < cols; ++c) gram[i][j] += pi[i][c] * pi[j][c];
  const Dense g = invert(gram);
  Dense h(cols, std::vector<double>(rows, 0.0));
  for (std::size_t z = 0; z < cols; ++z)
    for (std::size_t x = 0; x < rows; ++x)
      for (std::size_t r = 0; r < rows; ++r) h[z][x] += pi[r][z] * g[r][x];
  return h;
}

inline Dense to_dense(const sdude::Matrix& m) {
  Dense d(static_cast<std::size_t>(m.rows()), std::vector<double>(static_cast<std::size_t>(m.cols())));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) d[r][c] = m(r, c);
  return d;
}

inline sdude::Matrix random_stochastic(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  sdude::Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    double sum = 0.0;
    for (Eigen::Index c = 0; c < m.cols(); ++c) sum += (m(r, c) = u(rng));
    m.row(r) /= sum;
    // Fix the last entry so the row sums to 1 to working precision.
    m(r, m.cols() - 1) = 1.0 - (m.row(r).sum() - m(r, m.cols() - 1));
  }
  return m;
}

// Random channel whose smallest singular value is at least 0.05, so that its
// right inverse is well conditioned.
inline sdude::Matrix random_channel(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
  for (;;) {
    sdude::Matrix m = random_stochastic(rng, rows, cols);
    Eigen::JacobiSVD<sdude::Matrix> svd(m);
    if (svd.singularValues().minCoeff() >= 0.05) return m;
  }
}

inline sdude::Matrix random_loss(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
  std::uniform_real_distribution<double> u(0.0, 2.0);
  sdude::Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = u(rng);
  return m;
}

inline sdude::SymbolSequence random_sequence(std::mt19937_64& rng, std::size_t n, std::size_t q) {
  std::uniform_int_distribution<std::uint32_t> d(0, static_cast<std::uint32_t>(q - 1));
  std::vector<sdude::Symbol> s(n);
  for (auto& v : s) v = d(rng);
  return sdude::SymbolSequence(std::move(s), q);
}

// Stationary distribution by power iteration.
inline std::vector<double> power_stationary(const sdude::Matrix& p) {
  const auto q = static_cast<std::size_t>(p.rows());
  std::vector<double> v(q, 1.0 / static_cast<double>(q));
  for (int it = 0; it < 20000; ++it) {
    std::vector<double> next(q, 0.0);
    for (std::size_t x = 0; x < q; ++x)
      for (std::size_t y = 0; y < q; ++y) next[y] += v[x] * p(x, y);
    v = next;
  }
  return v;
}

// Posterior P(X_t = x | z^n) by summing the joint probability of every path.
// The step t -> t+1 (1-based) uses the segment containing t+1.
inline std::vector<std::vector<double>> enumerate_posteriors(
    const sdude::SymbolSequence& z, const std::vector<sdude::MarkovSegment>& segments,
    const sdude::Matrix& pi) {
  const std::size_t n = z.size();
  const auto q = static_cast<std::size_t>(pi.rows());
  std::vector<std::size_t> seg_of(n + 1);
  for (std::size_t s = 0; s < segments.size(); ++s)
    for (std::size_t t = segments[s].start; t <= segments[s].end; ++t) seg_of[t] = s;
  const std::vector<double> init = power_stationary(segments.front().transition);

  std::vector<std::vector<double>> post(n, std::vector<double>(q, 0.0));
  std::vector<std::size_t> path(n, 0);
  double total = 0.0;
  std::size_t count = 1;
  for (std::size_t i = 0; i < n; ++i) count *= q;
  for (std::size_t code = 0; code < count; ++code) {
    std::size_t rest = code;
    for (std::size_t i = 0; i < n; ++i) {
      path[i] = rest % q;
      rest /= q;
    }
    double prob = init[path[0]] * pi(path[0], z[0]);
    for (std::size_t i = 1; i < n; ++i) {
      prob *= segments[seg_of[i + 1]].transition(path[i - 1], path[i]) * pi(path[i], z[i]);
    }
    total += prob;
    for (std::size_t i = 0; i < n; ++i) post[i][path[i]] += prob;
  }
  for (auto& row : post)
    for (auto& v : row) v /= total;
  return post;
}

// Coefficient of determination of the least-squares line through (x, y).
inline double r_squared(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
}

}  // namespace oracle
