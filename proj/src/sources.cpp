#include "sdude/sources.hpp"

#include <cmath>
#include <string>

#include "sdude/random.hpp"

namespace sdude {

namespace {

// Stream numbers for the counter-based generator. Blocks use 1..r+1.
constexpr std::uint64_t kCorruptStream = 0x636F7272757074ULL;  // "corrupt"

void validate_distribution(const std::vector<double>& p, std::size_t size, const std::string& what) {
  if (p.size() != size) {
    throw ValidationError(what + " has " + std::to_string(p.size()) + " entries, expected " +
                          std::to_string(size));
  }
  double sum = 0.0;
  for (double v : p) {
    if (!std::isfinite(v) || v < 0.0) throw ValidationError(what + " has a negative entry");
    sum += v;
  }
  if (std::abs(sum - 1.0) > kValidationTolerance) {
    throw ValidationError(what + " sums to " + std::to_string(sum));
  }
}

void validate_transition(const Matrix& t, const std::string& what) {
  if (t.rows() == 0 || t.rows() != t.cols()) throw ValidationError(what + " must be square");
  for (Eigen::Index r = 0; r < t.rows(); ++r) {
    std::vector<double> row(static_cast<std::size_t>(t.cols()));
    for (Eigen::Index c = 0; c < t.cols(); ++c) row[static_cast<std::size_t>(c)] = t(r, c);
    validate_distribution(row, row.size(), what + " row " + std::to_string(r));
  }
}

std::size_t component_size(const ComponentSpec& c) {
  if (const auto* iid = std::get_if<IidComponent>(&c)) return iid->distribution.size();
  return static_cast<std::size_t>(std::get<MarkovComponent>(c).transition.rows());
}

std::vector<double> row_of(const Matrix& m, Eigen::Index r) {
  std::vector<double> out(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index c = 0; c < m.cols(); ++c) out[static_cast<std::size_t>(c)] = m(r, c);
  return out;
}

}  // namespace

std::size_t PiecewiseSourceSpec::alphabet_size() const {
  return components.empty() ? 0 : component_size(components.front());
}

void PiecewiseSourceSpec::validate(std::size_t n) const {
  if (components.empty()) throw ValidationError("source spec has no components");
  const std::size_t q = alphabet_size();
  if (q == 0) throw ValidationError("component alphabet is empty");
  for (std::size_t i = 0; i < components.size(); ++i) {
    const std::string what = "component " + std::to_string(i);
    if (component_size(components[i]) != q) {
      throw ValidationError(what + " alphabet differs from component 0");
    }
    if (const auto* iid = std::get_if<IidComponent>(&components[i])) {
      validate_distribution(iid->distribution, q, what + " distribution");
    } else {
      const auto& mk = std::get<MarkovComponent>(components[i]);
      validate_transition(mk.transition, what + " transition");
      if (mk.initial) validate_distribution(*mk.initial, q, what + " initial distribution");
    }
  }
  if (block_labels.size() != switch_times.size() + 1) {
    throw ValidationError("need exactly one block label per block (switch_times + 1)");
  }
  for (std::size_t i = 0; i < switch_times.size(); ++i) {
    const std::size_t prev = i == 0 ? 0 : switch_times[i - 1];
    if (switch_times[i] <= prev) throw ValidationError("switch times must be positive and strictly increasing");
    if (switch_times[i] >= n) throw ValidationError("switch time beyond the sequence length");
  }
  for (std::size_t b = 0; b < block_labels.size(); ++b) {
    if (block_labels[b] >= components.size()) throw ValidationError("block label out of range");
    if (b > 0 && block_labels[b] == block_labels[b - 1]) {
      throw ValidationError("adjacent blocks must use different components");
    }
  }
  if (continuing_chain) {
    for (const auto& c : components) {
      if (!std::holds_alternative<MarkovComponent>(c)) {
        throw ValidationError("continuing_chain requires Markov components");
      }
    }
  }
}

std::vector<double> stationary_distribution(const Matrix& transition) {
  validate_transition(transition, "transition");
  const Eigen::Index q = transition.rows();
  // Solve (P^T - I) pi = 0 with the last equation replaced by sum(pi) = 1.
  Matrix a = transition.transpose() - Matrix::Identity(q, q);
  a.row(q - 1).setOnes();
  Vector b = Vector::Zero(q);
  b(q - 1) = 1.0;
  Eigen::FullPivLU<Matrix> lu(a);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) {
    throw ValidationError("transition matrix has no unique stationary distribution");
  }
  const Vector pi = lu.solve(b);
  std::vector<double> out(static_cast<std::size_t>(q));
  for (Eigen::Index i = 0; i < q; ++i) out[static_cast<std::size_t>(i)] = std::max(0.0, pi(i));
  return out;
}

SymbolSequence sample_piecewise(const PiecewiseSourceSpec& spec, std::size_t n,
                                std::uint64_t seed) {
  spec.validate(n);
  const std::size_t q = spec.alphabet_size();
  std::vector<Symbol> out(n);
  std::optional<Symbol> previous;
  for (std::size_t b = 0; b < spec.block_labels.size(); ++b) {
    const std::size_t begin = b == 0 ? 0 : spec.switch_times[b - 1];
    const std::size_t end = b < spec.switch_times.size() ? spec.switch_times[b] : n;
    if (begin >= end) continue;
    CounterRng rng(seed, b + 1);
    const ComponentSpec& component = spec.components[spec.block_labels[b]];

    if (const auto* iid = std::get_if<IidComponent>(&component)) {
      for (std::size_t i = begin; i < end; ++i) {
        out[i] = static_cast<Symbol>(rng.categorical(iid->distribution));
      }
      continue;
    }
    const auto& mk = std::get<MarkovComponent>(component);
    std::vector<std::vector<double>> rows(q);
    for (std::size_t r = 0; r < q; ++r) rows[r] = row_of(mk.transition, static_cast<Eigen::Index>(r));
    Symbol state = 0;
    if (spec.continuing_chain && previous) {
      state = static_cast<Symbol>(rng.categorical(rows[*previous]));
    } else {
      const std::vector<double> init =
          mk.initial ? *mk.initial : stationary_distribution(mk.transition);
      state = static_cast<Symbol>(rng.categorical(init));
    }
    out[begin] = state;
    for (std::size_t i = begin + 1; i < end; ++i) {
      state = static_cast<Symbol>(rng.categorical(rows[state]));
      out[i] = state;
    }
    previous = state;
  }
  return SymbolSequence(std::move(out), q);
}

SymbolSequence corrupt(const SymbolSequence& x, const Matrix& pi, std::uint64_t seed) {
  if (static_cast<std::size_t>(pi.rows()) != x.alphabet_size()) {
    throw ValidationError("channel input alphabet does not match the clean sequence");
  }
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(pi.rows()));
  for (Eigen::Index r = 0; r < pi.rows(); ++r) {
    rows[static_cast<std::size_t>(r)] = row_of(pi, r);
    validate_distribution(rows[static_cast<std::size_t>(r)], static_cast<std::size_t>(pi.cols()),
                          "channel row " + std::to_string(r));
  }
  CounterRng rng(seed, kCorruptStream);
  std::vector<Symbol> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = static_cast<Symbol>(rng.categorical(rows[x[i]]));
  }
  return SymbolSequence(std::move(out), static_cast<std::size_t>(pi.cols()));
}

SymbolSequence corrupt(const SymbolSequence& x, const ChannelModel& channel, std::uint64_t seed) {
  return corrupt(x, channel.pi(), seed);
}

Matrix symmetric_markov(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("flip probability must lie in [0,1]");
  Matrix t(2, 2);
  t << 1.0 - p, p, p, 1.0 - p;
  return t;
}

PiecewiseSourceSpec two_block_spec(std::size_t n) {
  if (n < 2) throw ValidationError("two-block source needs n >= 2");
  PiecewiseSourceSpec spec;
  spec.components = {IidComponent{{1.0, 0.0}}, IidComponent{{0.0, 1.0}}};
  spec.switch_times = {n / 2};
  spec.block_labels = {0, 1};
  return spec;
}

PiecewiseSourceSpec switching_markov_spec(double p1, double p2, std::size_t switch_at) {
  PiecewiseSourceSpec spec;
  // Adjacent blocks must use distinct components even when p1 == p2.
  spec.components = {MarkovComponent{symmetric_markov(p1), std::nullopt},
                     MarkovComponent{symmetric_markov(p2), std::nullopt}};
  spec.switch_times = {switch_at};
  spec.block_labels = {0, 1};
  spec.continuing_chain = true;
  return spec;
}

PiecewiseSourceSpec spec_from_json(const nlohmann::json& j, std::optional<std::size_t> length) {
  try {
    PiecewiseSourceSpec spec;
    for (const auto& c : j.at("components")) {
      const std::string type = c.at("type").get<std::string>();
      if (type == "iid") {
        spec.components.emplace_back(IidComponent{c.at("distribution").get<std::vector<double>>()});
      } else if (type == "markov") {
        const auto rows = c.at("transition").get<std::vector<std::vector<double>>>();
        if (rows.empty()) throw ValidationError("empty transition matrix");
        Matrix t(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
        for (std::size_t r = 0; r < rows.size(); ++r) {
          if (rows[r].size() != rows[0].size()) throw ValidationError("ragged transition matrix");
          for (std::size_t col = 0; col < rows[r].size(); ++col) {
            t(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(col)) = rows[r][col];
          }
        }
        MarkovComponent mk{t, std::nullopt};
        if (c.contains("initial")) mk.initial = c.at("initial").get<std::vector<double>>();
        spec.components.emplace_back(std::move(mk));
      } else {
        throw ValidationError("unknown component type '" + type + "'");
      }
    }
    if (j.contains("switch_fractions")) {
      if (j.contains("switch_times")) {
        throw ValidationError("give either switch_times or switch_fractions, not both");
      }
      if (!length) throw ValidationError("switch_fractions need a sequence length");
      for (double f : j.at("switch_fractions").get<std::vector<double>>()) {
        if (!(f > 0.0 && f < 1.0)) throw ValidationError("switch fractions must lie in (0,1)");
        spec.switch_times.push_back(
            static_cast<std::size_t>(std::floor(f * static_cast<double>(*length))));
      }
    } else {
      spec.switch_times = j.value("switch_times", std::vector<std::size_t>{});
    }
    spec.block_labels = j.at("block_labels").get<std::vector<std::size_t>>();
    spec.continuing_chain = j.value("continuing_chain", false);
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed source spec: ") + e.what());
  }
}

nlohmann::json spec_to_json(const PiecewiseSourceSpec& spec) {
  nlohmann::json j;
  j["components"] = nlohmann::json::array();
  for (const auto& c : spec.components) {
    if (const auto* iid = std::get_if<IidComponent>(&c)) {
      j["components"].push_back({{"type", "iid"}, {"distribution", iid->distribution}});
    } else {
      const auto& mk = std::get<MarkovComponent>(c);
      std::vector<std::vector<double>> rows;
      for (Eigen::Index r = 0; r < mk.transition.rows(); ++r) rows.push_back(row_of(mk.transition, r));
      nlohmann::json entry = {{"type", "markov"}, {"transition", rows}};
      if (mk.initial) entry["initial"] = *mk.initial;
      j["components"].push_back(entry);
    }
  }
  j["switch_times"] = spec.switch_times;
  j["block_labels"] = spec.block_labels;
  j["continuing_chain"] = spec.continuing_chain;
  return j;
}

}  // namespace sdude
