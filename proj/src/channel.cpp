#include "resolvon/channel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "resolvon/error.hpp"

namespace resolvon {

namespace {

constexpr std::uint64_t kMaxIidSupport = 1'000'000;

std::string symbol_name(const std::vector<std::string>& labels, Symbol x) {
  return x < labels.size() ? "'" + labels[x] + "'" : std::to_string(x);
}

}  // namespace

CQChannel::CQChannel(std::vector<std::string> labels, std::vector<HermitianOperator> states)
    : labels_(std::move(labels)), states_(std::move(states)) {
  if (states_.empty()) throw InputError("channel needs at least one input symbol");
  if (labels_.empty()) {
    for (std::size_t x = 0; x < states_.size(); ++x) labels_.push_back(std::to_string(x));
  }
  if (labels_.size() != states_.size()) {
    throw InputError("channel has " + std::to_string(labels_.size()) + " labels but " +
                     std::to_string(states_.size()) + " states");
  }
  const std::size_t d = states_.front().dim();
  for (std::size_t x = 0; x < states_.size(); ++x) {
    const HermitianOperator& w = states_[x];
    std::ostringstream os;
    os << "state for symbol " << symbol_name(labels_, x) << ": ";
    if (w.dim() != d) {
      os << "dimension " << w.dim() << " differs from " << d;
      throw InputError(os.str());
    }
    const double tr = w.trace();
    if (std::abs(tr - 1.0) > kDensityTol) {
      os << "trace " << tr << " is not 1";
      throw InputError(os.str());
    }
    const double low = min_eigenvalue(w);
    if (low < -kDensityTol) {
      os << "not positive semidefinite (eigenvalue " << low << ")";
      throw InputError(os.str());
    }
  }
}

const HermitianOperator& CQChannel::state(Symbol x) const {
  if (x >= states_.size()) {
    throw InputError("symbol " + std::to_string(x) + " outside alphabet of size " +
                     std::to_string(states_.size()));
  }
  return states_[x];
}

std::size_t CQChannel::ambient_dim(std::size_t n) const {
  std::size_t dim = 1;
  for (std::size_t i = 0; i < n; ++i) {
    dim *= output_dim();
    if (dim > kMaxAmbientDim) {
      std::ostringstream os;
      os << "ambient dimension " << output_dim() << "^" << n << " exceeds the limit of "
         << kMaxAmbientDim;
      throw GuardrailError(os.str());
    }
  }
  return dim;
}

HermitianOperator CQChannel::sequence_state(const Sequence& xn) const {
  if (xn.empty()) throw InputError("empty input sequence");
  ambient_dim(xn.size());
  ComplexMatrix m = state(xn.front()).matrix();
  for (std::size_t i = 1; i < xn.size(); ++i) m = kron(m, state(xn[i]).matrix());
  return HermitianOperator(m);
}

void validate_distribution(const std::vector<double>& p, std::size_t expected_size) {
  if (p.size() != expected_size) {
    throw InputError("distribution has " + std::to_string(p.size()) + " entries, expected " +
                     std::to_string(expected_size));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!std::isfinite(p[i]) || p[i] < 0.0) {
      std::ostringstream os;
      os << "probability entry " << i << " is invalid: " << p[i];
      throw InputError(os.str());
    }
    sum += p[i];
  }
  if (std::abs(sum - 1.0) > kWeightSumTol) {
    std::ostringstream os;
    os.precision(17);
    os << "probabilities sum to " << sum << ", not 1";
    throw InputError(os.str());
  }
}

SequenceDistribution SequenceDistribution::iid(const std::vector<double>& p, std::size_t n) {
  if (n == 0) throw InputError("block length n must be >= 1");
  validate_distribution(p, p.size());
  std::vector<Symbol> alive;
  for (Symbol x = 0; x < p.size(); ++x) {
    if (p[x] > 0.0) alive.push_back(x);
  }
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < n; ++i) {
    count *= alive.size();
    if (count > kMaxIidSupport) {
      throw GuardrailError("i.i.d. support exceeds " + std::to_string(kMaxIidSupport) +
                           " sequences");
    }
  }
  SequenceDistribution out;
  out.n = n;
  std::vector<std::size_t> digits(n, 0);
  for (std::uint64_t s = 0; s < count; ++s) {
    Sequence xn(n);
    double prob = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      xn[i] = alive[digits[i]];
      prob *= p[xn[i]];
    }
    out.support.push_back(std::move(xn));
    out.probs.push_back(prob);
    for (std::size_t i = n; i-- > 0;) {
      if (++digits[i] < alive.size()) break;
      digits[i] = 0;
    }
  }
  return out;
}

SequenceDistribution SequenceDistribution::uniform_on(const TypeClass& t) {
  SequenceDistribution out;
  out.n = t.n;
  out.support = sequences_of(t);
  out.probs.assign(out.support.size(), 1.0 / static_cast<double>(out.support.size()));
  return out;
}

SequenceDistribution SequenceDistribution::point_mass(Sequence xn) {
  if (xn.empty()) throw InputError("empty input sequence");
  SequenceDistribution out;
  out.n = xn.size();
  out.support.push_back(std::move(xn));
  out.probs.push_back(1.0);
  return out;
}

double SequenceDistribution::mass_of(const TypeClass& t, std::size_t alphabet_size) const {
  double mass = 0.0;
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (type_of(support[i], alphabet_size) == t) mass += probs[i];
  }
  return mass;
}

SequenceDistribution SequenceDistribution::restricted_to(const TypeClass& t,
                                                         std::size_t alphabet_size) const {
  SequenceDistribution out;
  out.n = n;
  double mass = 0.0;
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (probs[i] > 0.0 && type_of(support[i], alphabet_size) == t) {
      out.support.push_back(support[i]);
      out.probs.push_back(probs[i]);
      mass += probs[i];
    }
  }
  for (double& q : out.probs) q /= mass;
  return out;
}

HermitianOperator output_mix(const CQChannel& ch, const std::vector<double>& p) {
  validate_distribution(p, ch.alphabet_size());
  HermitianOperator mix = HermitianOperator::zero(ch.output_dim());
  for (Symbol x = 0; x < p.size(); ++x) {
    if (p[x] != 0.0) mix += ch.state(x) * p[x];
  }
  return mix;
}

HermitianOperator output_mix(const CQChannel& ch, const SequenceDistribution& p) {
  if (p.support.empty()) throw InputError("sequence distribution has empty support");
  if (p.support.size() != p.probs.size()) throw InputError("support and probabilities differ in size");
  validate_distribution(p.probs, p.probs.size());
  HermitianOperator mix = HermitianOperator::zero(ch.ambient_dim(p.n));
  for (std::size_t i = 0; i < p.support.size(); ++i) {
    if (p.support[i].size() != p.n) throw InputError("sequence length differs from n");
    if (p.probs[i] != 0.0) mix += ch.sequence_state(p.support[i]) * p.probs[i];
  }
  return mix;
}

HermitianOperator codebook_state(const CQChannel& ch, const std::vector<Sequence>& codebook) {
  if (codebook.empty()) throw InputError("empty codebook");
  std::map<Sequence, std::size_t> multiplicity;
  for (const Sequence& s : codebook) ++multiplicity[s];
  HermitianOperator mix = HermitianOperator::zero(ch.ambient_dim(codebook.front().size()));
  const double inv = 1.0 / static_cast<double>(codebook.size());
  for (const auto& [s, m] : multiplicity) mix += ch.sequence_state(s) * (static_cast<double>(m) * inv);
  return mix;
}

double von_neumann_entropy(const HermitianOperator& rho) {
  const RealVector ev = eigenvalues_of(rho);
  double h = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > kDefaultRankTol) h -= ev(i) * std::log(ev(i));
  }
  return h;
}

double conditional_entropy(const CQChannel& ch, const std::vector<double>& p) {
  validate_distribution(p, ch.alphabet_size());
  double h = 0.0;
  for (Symbol x = 0; x < p.size(); ++x) {
    if (p[x] > 0.0) h += p[x] * von_neumann_entropy(ch.state(x));
  }
  return h;
}

double holevo_information(const CQChannel& ch, const std::vector<double>& p) {
  return von_neumann_entropy(output_mix(ch, p)) - conditional_entropy(ch, p);
}

namespace {

// Holevo information on an unnormalized grid point, reusing the state entropies.
class HolevoObjective {
 public:
  explicit HolevoObjective(const CQChannel& ch) : ch_(ch) {
    for (const HermitianOperator& w : ch.states()) entropies_.push_back(von_neumann_entropy(w));
  }

  double operator()(const std::vector<double>& p) const {
    HermitianOperator mix = HermitianOperator::zero(ch_.output_dim());
    double cond = 0.0;
    for (Symbol x = 0; x < p.size(); ++x) {
      if (p[x] == 0.0) continue;
      mix += ch_.state(x) * p[x];
      cond += p[x] * entropies_[x];
    }
    return von_neumann_entropy(mix) - cond;
  }

 private:
  const CQChannel& ch_;
  std::vector<double> entropies_;
};

void for_each_composition(std::size_t parts, std::size_t total,
                          const std::function<void(const std::vector<std::size_t>&)>& visit) {
  std::vector<std::size_t> c(parts, 0);
  c[0] = total;
  while (true) {
    visit(c);
    // Move one unit from the first non-zero part (if not last) to its neighbour,
    // folding everything before it back into part 0.
    std::size_t i = 0;
    while (i + 1 < parts && c[i] == 0) ++i;
    if (i + 1 >= parts) return;
    const std::size_t carry = c[i] - 1;
    c[i] = 0;
    c[i + 1] += 1;
    c[0] = carry;
  }
}

}  // namespace

CapacityEstimate holevo_capacity(const CQChannel& ch, std::size_t grid_resolution) {
  const std::size_t k = ch.alphabet_size();
  if (k > 4) {
    throw InputError("grid capacity search supports at most 4 input symbols (got " +
                     std::to_string(k) + "); supply an input distribution instead");
  }
  if (grid_resolution == 0) throw InputError("grid resolution must be >= 1");
  const HolevoObjective objective(ch);

  std::vector<double> best(k, 1.0 / static_cast<double>(k));
  double best_value = objective(best);
  const double step = 1.0 / static_cast<double>(grid_resolution);
  for_each_composition(k, grid_resolution, [&](const std::vector<std::size_t>& c) {
    std::vector<double> p(k);
    for (std::size_t x = 0; x < k; ++x) p[x] = static_cast<double>(c[x]) * step;
    const double v = objective(p);
    if (v > best_value) {
      best_value = v;
      best = p;
    }
  });

  // Pairwise coordinate ascent: shift mass between two symbols, halving the
  // step whenever no shift improves.
  double delta = step;
  while (delta > 1e-12 && k > 1) {
    bool improved = false;
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        if (i == j || best[i] <= 0.0) continue;
        std::vector<double> p = best;
        const double moved = std::min(delta, p[i]);
        p[i] -= moved;
        p[j] += moved;
        const double v = objective(p);
        if (v > best_value) {
          best_value = v;
          best = std::move(p);
          improved = true;
        }
      }
    }
    if (!improved) delta *= 0.5;
  }
  // Grid points are not exactly normalized in floating point.
  double sum = 0.0;
  for (double q : best) sum += q;
  for (double& q : best) q /= sum;
  return {objective(best), best};
}

Hypergraph channel_hypergraph(const CQChannel& ch, const std::vector<double>& p) {
  validate_distribution(p, ch.alphabet_size());
  return Hypergraph(ch.states(), p);
}

}  // namespace resolvon
