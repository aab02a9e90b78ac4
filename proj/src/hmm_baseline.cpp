#include "sdude/hmm_baseline.hpp"

#include <cmath>

#include "sdude/estimated_loss.hpp"
#include "sdude/sources.hpp"

namespace sdude {

namespace {

void normalize(std::span<double> v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  if (!(sum > 0.0)) throw ValidationError("observation has zero likelihood under the model");
  for (double& x : v) x /= sum;
}

// For each 0-based step i -> i+1, the index of the segment whose matrix applies.
std::vector<std::size_t> step_segments(const std::vector<MarkovSegment>& segments, std::size_t n,
                                       SwitchConvention convention) {
  std::vector<std::size_t> segment_of(n);
  for (std::size_t s = 0; s < segments.size(); ++s) {
    for (std::size_t t = segments[s].start; t <= segments[s].end; ++t) segment_of[t - 1] = s;
  }
  std::vector<std::size_t> steps(n > 0 ? n - 1 : 0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    steps[i] = convention == SwitchConvention::kIncoming ? segment_of[i + 1] : segment_of[i];
  }
  return steps;
}

}  // namespace

Posteriors fb_posteriors(const SymbolSequence& z, const std::vector<MarkovSegment>& segments,
                         const Matrix& pi, SwitchConvention convention) {
  const std::size_t n = z.size();
  if (n == 0) throw ValidationError("empty observation sequence");
  if (static_cast<std::size_t>(pi.cols()) != z.alphabet_size()) {
    throw ValidationError("channel output alphabet does not match the observations");
  }
  const auto q = static_cast<std::size_t>(pi.rows());
  std::size_t expected_start = 1;
  for (const auto& seg : segments) {
    if (seg.start != expected_start || seg.end < seg.start || seg.end > n) {
      throw ValidationError("segments must tile 1..n in order");
    }
    if (static_cast<std::size_t>(seg.transition.rows()) != q ||
        static_cast<std::size_t>(seg.transition.cols()) != q) {
      throw ValidationError("segment transition matrix does not match the clean alphabet");
    }
    for (Eigen::Index r = 0; r < seg.transition.rows(); ++r) {
      if ((seg.transition.row(r).array() < 0.0).any() ||
          std::abs(seg.transition.row(r).sum() - 1.0) > kValidationTolerance) {
        throw ValidationError("segment transition matrix is not row-stochastic");
      }
    }
    expected_start = seg.end + 1;
  }
  if (expected_start != n + 1) throw ValidationError("segments must tile 1..n in order");

  const std::vector<std::size_t> steps = step_segments(segments, n, convention);
  const std::vector<double> initial = stationary_distribution(segments.front().transition);

  // alpha holds the filtered distribution P(X_t | z_1..t); beta is rescaled
  // each step so only ratios matter.
  Posteriors alpha(n, q);
  {
    auto a = alpha.row(0);
    for (std::size_t x = 0; x < q; ++x) a[x] = initial[x] * pi(x, z[0]);
    normalize(a);
  }
  for (std::size_t i = 1; i < n; ++i) {
    const Matrix& p = segments[steps[i - 1]].transition;
    auto prev = alpha.row(i - 1);
    auto cur = alpha.row(i);
    for (std::size_t y = 0; y < q; ++y) {
      double acc = 0.0;
      for (std::size_t x = 0; x < q; ++x) acc += prev[x] * p(x, y);
      cur[y] = acc * pi(y, z[i]);
    }
    normalize(cur);
  }

  Posteriors post(n, q);
  std::vector<double> beta(q, 1.0);
  std::vector<double> next_beta(q);
  for (std::size_t i = n; i-- > 0;) {
    if (i + 1 < n) {
      const Matrix& p = segments[steps[i]].transition;
      for (std::size_t x = 0; x < q; ++x) {
        double acc = 0.0;
        for (std::size_t y = 0; y < q; ++y) acc += p(x, y) * pi(y, z[i + 1]) * beta[y];
        next_beta[x] = acc;
      }
      normalize(next_beta);
      beta.swap(next_beta);
    }
    auto out = post.row(i);
    const auto a = alpha.row(i);
    for (std::size_t x = 0; x < q; ++x) out[x] = a[x] * beta[x];
    normalize(out);
  }
  return post;
}

Posteriors fb_posteriors(const SymbolSequence& z, const std::vector<MarkovSegment>& segments,
                         const ChannelModel& channel, SwitchConvention convention) {
  return fb_posteriors(z, segments, channel.pi(), convention);
}

SymbolSequence map_denoise(const Posteriors& posteriors, const LossMatrix& loss) {
  if (posteriors.alphabet_size() != loss.clean_size()) {
    throw ValidationError("posterior alphabet does not match the loss matrix");
  }
  std::vector<Symbol> out(posteriors.size());
  Vector zeta(static_cast<Eigen::Index>(posteriors.alphabet_size()));
  for (std::size_t i = 0; i < posteriors.size(); ++i) {
    const auto row = posteriors.row(i);
    for (std::size_t x = 0; x < row.size(); ++x) zeta(static_cast<Eigen::Index>(x)) = row[x];
    out[i] = static_cast<Symbol>(bayes_response(zeta, loss.lambda()));
  }
  return SymbolSequence(std::move(out), loss.recon_size());
}

}  // namespace sdude
