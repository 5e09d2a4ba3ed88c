#include "resolvon/resolver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <sstream>

#include "resolvon/error.hpp"
#include "resolvon/random_ops.hpp"

namespace resolvon {

namespace {

constexpr double kInvE = 0.36787944117144233;
constexpr double kEtaCap = 1e300;
constexpr std::uint64_t kMaxOracleCodebooks = 1'000'000;
constexpr double kCheckTol = 1e-9;

void prefix_all(std::vector<std::string>& out, const std::string& prefix,
                const std::vector<std::string>& items) {
  for (const std::string& s : items) out.push_back(prefix + s);
}

std::string type_label(const TypeClass& t) {
  std::string s;
  for (std::size_t x = 0; x < t.counts.size(); ++x) {
    if (x != 0) s += ':';
    s += std::to_string(t.counts[x]);
  }
  return s;
}

// W_C for a multiset of sequences given as (sequence, count) pairs.
HermitianOperator weighted_states(const CQChannel& ch, const std::map<Sequence, std::uint64_t>& counts,
                                  std::uint64_t total, std::size_t ambient) {
  HermitianOperator mix = HermitianOperator::zero(ambient);
  const double inv = 1.0 / static_cast<double>(total);
  for (const auto& [s, c] : counts) mix += ch.sequence_state(s) * (static_cast<double>(c) * inv);
  return mix;
}

}  // namespace

BoundTerms fixed_type_bound_terms(const SoftCoverParams& params) {
  BoundTerms b;
  b.epsilon_term = 3.0 * params.epsilon;
  b.tau_term = 3.0 * params.tau;
  b.tau0_term = 3.5 * params.tau0;
  b.root_term = std::sqrt(2.0 * params.epsilon + params.tau + params.tau0);
  b.unpinch_term = 2.0 * std::sqrt(params.tau) + std::sqrt(2.0 * params.tau);
  return b;
}

std::vector<std::string> ResolvabilityReport::violations() const {
  std::vector<std::string> out;
  prefix_all(out, "cover: ", cover.violations());
  if (edge_gap_max > edge_gap_bound + kCheckTol) out.push_back("edge gap exceeds 2 sqrt(tau) + sqrt(2 tau)");
  if (min_edge_trace < edge_trace_floor - kCheckTol) out.push_back("edge trace below 1 - 2 dim |X| / alpha^2");
  if (cover.theorem2_holds.has_value() && trace_dist > bound + kCheckTol) {
    out.push_back("trace distance exceeds the fixed-type bound");
  }
  return out;
}

struct FixedTypeInstance::Prepared {
  std::vector<Sequence> members;
  std::vector<double> weights;
  ProductSubspace vertex;
  Hypergraph hypergraph;
  HermitianOperator target;
  ResolvabilityReport base;
};

FixedTypeInstance::FixedTypeInstance(const CQChannel& ch, TypeClass t, const SoftCoverParams& params,
                                     std::optional<SequenceDistribution> p_t)
    : FixedTypeInstance(ch, t, params, [&] {
        SoftCoverParams adjusted = params;
        return prepare(ch, t, adjusted, p_t);
      }()) {}

FixedTypeInstance::FixedTypeInstance(const CQChannel& ch, TypeClass t, const SoftCoverParams& params,
                                     Prepared prepared)
    : ch_(ch),
      type_(std::move(t)),
      params_(params),
      members_(std::move(prepared.members)),
      weights_(std::move(prepared.weights)),
      vertex_(std::move(prepared.vertex)),
      hypergraph_(std::move(prepared.hypergraph)),
      target_(std::move(prepared.target)),
      base_(std::move(prepared.base)) {
  params_.eta = base_.eta;
}

FixedTypeInstance::Prepared FixedTypeInstance::prepare(
    const CQChannel& ch, const TypeClass& t, SoftCoverParams& params,
    const std::optional<SequenceDistribution>& p_t) {
  params.eta = 1.0;
  params.validate();
  if (t.alphabet_size() != ch.alphabet_size()) {
    throw InputError("type " + type_label(t) + " does not match the channel alphabet size " +
                     std::to_string(ch.alphabet_size()));
  }
  if (t.n == 0) throw InputError("block length n must be >= 1");
  const std::size_t ambient = ch.ambient_dim(t.n);
  const std::size_t d = ch.output_dim();
  const std::size_t k = ch.alphabet_size();

  std::vector<Sequence> members;
  std::vector<double> weights;
  if (p_t) {
    validate_distribution(p_t->probs, p_t->support.size());
    for (std::size_t i = 0; i < p_t->support.size(); ++i) {
      if (p_t->support[i].size() != t.n || type_of(p_t->support[i], k) != t) {
        throw InputError("input distribution for type " + type_label(t) +
                         " has support outside the type class");
      }
      if (p_t->probs[i] > 0.0) {
        members.push_back(p_t->support[i]);
        weights.push_back(p_t->probs[i]);
      }
    }
    double sum = 0.0;
    for (double w : weights) sum += w;
    for (double& w : weights) w /= sum;
  } else {
    members = sequences_of(t);
    weights.assign(members.size(), 1.0 / static_cast<double>(members.size()));
  }

  ResolvabilityReport base;
  base.type = t;
  base.ambient_dim = ambient;
  base.edge_count = members.size();
  base.alpha = resolvability_alpha(d, k, params.tau);
  base.alpha_output = base.alpha * std::sqrt(static_cast<double>(k));
  const std::vector<double> dist = t.distribution();
  base.output_entropy = von_neumann_entropy(output_mix(ch, dist));
  base.conditional_entropy = conditional_entropy(ch, dist);
  base.holevo_info = base.output_entropy - base.conditional_entropy;
  base.eta = std::min(kEtaCap, conditional_eigenvalue_ceiling(base.conditional_entropy, d, k,
                                                              base.alpha, t.n));
  base.edge_gap_bound = 2.0 * std::sqrt(params.tau) + std::sqrt(2.0 * params.tau);
  base.edge_trace_floor = edge_trace_floor(d, k, base.alpha);
  base.terms = fixed_type_bound_terms(params);
  base.bound = base.terms.total();
  const double nlnd = static_cast<double>(t.n) * std::log(static_cast<double>(d));
  if (nlnd > 0.0) {
    const double dk = static_cast<double>(k);
    const double slack = std::sqrt(2.0) * kInvE / std::sqrt(params.tau) *
                         std::pow(static_cast<double>(d), 1.5) * (dk + std::pow(dk, 1.5)) *
                         std::sqrt(static_cast<double>(t.n));
    base.required_size_literal_log = static_cast<double>(t.n) * base.holevo_info + slack +
                                     std::log(nlnd / (params.epsilon * params.epsilon * params.tau0));
  }

  ProductSubspace vertex = output_typical_subspace(ch, t, base.alpha);
  if (vertex.rank() == 0) throw NumericalError("output-typical subspace of type " + type_label(t) + " is empty");
  base.vertex_dim = vertex.rank();
  const ComplexMatrix v = vertex.basis();

  const TypicalitySpec spec{base.alpha, t.n};
  std::vector<HermitianOperator> edges;
  HermitianOperator target = HermitianOperator::zero(ambient);
  base.min_edge_trace = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < members.size(); ++i) {
    HermitianOperator q = compressed_edge_Q(vertex, conditional_typical_subspace(ch, members[i], spec));
    const HermitianOperator w = ch.sequence_state(members[i]);
    base.min_edge_trace = std::min(base.min_edge_trace, q.trace());
    const HermitianOperator q_ambient(v * q.matrix() * v.adjoint());
    base.edge_gap_max = std::max(base.edge_gap_max, trace_norm(q_ambient - w));
    target += w * weights[i];
    edges.push_back(std::move(q));
  }
  params.eta = base.eta;
  Hypergraph h(std::move(edges), weights);
  return {std::move(members), std::move(weights), std::move(vertex), std::move(h), std::move(target),
          std::move(base)};
}

std::vector<Sequence> FixedTypeInstance::codebook_of(const CoverRun& run) const {
  std::vector<Sequence> out;
  out.reserve(run.codebook().size());
  for (std::size_t idx : run.codebook()) out.push_back(members_.at(idx));
  return out;
}

ResolvabilityReport FixedTypeInstance::report(const CoverRun& run) const {
  ResolvabilityReport r = base_;
  r.cover = run.certificate();
  r.d_max = r.cover.d_max;
  r.codebook_size = r.cover.l_used;
  r.required_size = r.cover.l_required;
  std::map<Sequence, std::uint64_t> counts;
  for (std::size_t idx : run.codebook()) ++counts[members_.at(idx)];
  r.trace_dist = trace_distance(target_, weighted_states(ch_, counts, run.codebook().size(),
                                                         target_.dim()));
  return r;
}

FixedTypeResult fixed_type_resolve(const CQChannel& ch, const TypeClass& t,
                                   const SoftCoverParams& params, std::optional<std::uint64_t> l,
                                   std::optional<SequenceDistribution> p_t) {
  const FixedTypeInstance inst(ch, t, params, std::move(p_t));
  std::uint64_t size = 0;
  if (l) {
    if (*l == 0) throw InputError("codebook size must be >= 1");
    size = *l;
  } else {
    const SizeRequirement req =
        required_size(inst.params(), inst.hypergraph().vertex_dim(), Theorem2Size{});
    if (req.rounds > kMaxAutoCodebookSize) {
      std::ostringstream os;
      os << "required codebook size " << req.rounds << " for type " << type_label(t)
         << " exceeds the automatic limit of " << kMaxAutoCodebookSize
         << "; pass an explicit codebook size";
      throw GuardrailError(os.str());
    }
    size = req.rounds;
  }
  CoverRun run = inst.start();
  run.advance(size);
  return {inst.codebook_of(run), inst.report(run)};
}

std::vector<std::string> GeneralResolveReport::violations() const {
  std::vector<std::string> out;
  if (type_cover) prefix_all(out, "type simulation: ", type_cover->violations());
  bool all_evaluated = !components.empty();
  for (const TypeComponent& c : components) {
    prefix_all(out, "type " + type_label(c.type) + ": ", c.report.violations());
    all_evaluated = all_evaluated && c.report.cover.theorem2_holds.has_value();
  }
  if (all_evaluated && trace_dist > bound + kCheckTol) {
    out.push_back("trace distance exceeds type TV plus the largest per-type bound");
  }
  return out;
}

GeneralResolveResult general_resolve(const CQChannel& ch, const SequenceDistribution& p_n,
                                     const GeneralResolveParams& params) {
  params.cover.validate();
  if (p_n.support.empty()) throw InputError("input distribution has empty support");
  if (p_n.support.size() != p_n.probs.size()) throw InputError("support and probabilities differ in size");
  validate_distribution(p_n.probs, p_n.probs.size());
  if (!(params.type_tv_target >= 0.0)) throw InputError("type TV target must be non-negative");
  if (params.max_type_rounds == 0) throw InputError("max type rounds must be >= 1");
  const std::size_t k = ch.alphabet_size();
  const std::size_t ambient = ch.ambient_dim(p_n.n);

  // Type weights, in descending lexicographic order of the count vectors.
  std::map<std::vector<std::size_t>, double, std::greater<>> by_type;
  for (std::size_t i = 0; i < p_n.support.size(); ++i) {
    if (p_n.support[i].size() != p_n.n) throw InputError("sequence length differs from n");
    if (p_n.probs[i] > 0.0) by_type[type_of(p_n.support[i], k).counts] += p_n.probs[i];
  }
  std::vector<TypeClass> types;
  std::vector<double> type_weights;
  for (const auto& [counts, w] : by_type) {
    types.push_back(make_type(counts));
    type_weights.push_back(w);
  }
  double total = 0.0;
  for (double w : type_weights) total += w;
  for (double& w : type_weights) w /= total;

  GeneralResolveReport report;
  report.n = p_n.n;
  report.type_tv_target = params.type_tv_target;
  report.type_epsilon = params.type_epsilon;
  std::vector<std::uint64_t> multiplicity(types.size(), 0);
  if (types.size() == 1) {
    multiplicity[0] = 1;
    report.type_rounds = 1;
  } else {
    std::vector<HermitianOperator> edges;
    for (std::size_t i = 0; i < types.size(); ++i) {
      std::vector<double> e(types.size(), 0.0);
      e[i] = 1.0;
      edges.push_back(HermitianOperator::diagonal(std::span<const double>(e)));
    }
    SoftCoverParams type_params = params.cover;
    type_params.epsilon = params.type_epsilon;
    type_params.eta = 1.0;
    CoverRun run(Hypergraph(std::move(edges), type_weights), type_params);
    auto tv = [&] {
      const double rounds = static_cast<double>(run.codebook().size());
      double s = 0.0;
      for (std::size_t i = 0; i < types.size(); ++i) {
        s += std::abs(static_cast<double>(multiplicity[i]) / rounds - type_weights[i]);
      }
      return 0.5 * s;
    };
    do {
      run.advance(1);
      ++multiplicity[run.codebook().back()];
    } while (tv() > params.type_tv_target && run.codebook().size() < params.max_type_rounds);
    report.type_rounds = run.codebook().size();
    report.type_cover = run.certificate();
  }
  {
    double s = 0.0;
    for (std::size_t i = 0; i < types.size(); ++i) {
      s += std::abs(static_cast<double>(multiplicity[i]) / static_cast<double>(report.type_rounds) -
                    type_weights[i]);
    }
    report.type_tv = 0.5 * s;
  }

  GeneralResolveResult result;
  HermitianOperator mixed = HermitianOperator::zero(ambient);
  double worst_bound = 0.0;
  for (std::size_t i = 0; i < types.size(); ++i) {
    if (multiplicity[i] == 0) continue;
    FixedTypeResult part = fixed_type_resolve(ch, types[i], params.cover, params.per_type_size,
                                              p_n.restricted_to(types[i], k));
    const double share = static_cast<double>(multiplicity[i]) / static_cast<double>(report.type_rounds);
    mixed += codebook_state(ch, part.codebook) * share;
    worst_bound = std::max(worst_bound, part.report.bound);
    report.per_type_size = part.report.codebook_size;
    report.codebook_size += multiplicity[i] * part.report.codebook_size;
    result.type_codebooks.push_back(std::move(part.codebook));
    report.components.push_back({types[i], type_weights[i], multiplicity[i], std::move(part.report)});
  }
  report.bound = report.type_tv + worst_bound;
  report.trace_dist = trace_distance(output_mix(ch, p_n), mixed);
  result.report = std::move(report);
  return result;
}

std::vector<Sequence> GeneralResolveResult::expanded_codebook() const {
  std::vector<Sequence> out;
  for (std::size_t i = 0; i < type_codebooks.size(); ++i) {
    for (std::uint64_t m = 0; m < report.components[i].multiplicity; ++m) {
      out.insert(out.end(), type_codebooks[i].begin(), type_codebooks[i].end());
    }
  }
  return out;
}

BaselineStats random_baseline(const CQChannel& ch, const SequenceDistribution& p_n, std::uint64_t l,
                              std::uint64_t seed, std::uint64_t trials) {
  if (l == 0) throw InputError("codebook size must be >= 1");
  if (trials == 0) throw InputError("trial count must be >= 1");
  const HermitianOperator target = output_mix(ch, p_n);
  std::map<std::size_t, HermitianOperator> cache;
  auto state = [&](std::size_t i) -> const HermitianOperator& {
    auto it = cache.find(i);
    if (it == cache.end()) it = cache.emplace(i, ch.sequence_state(p_n.support[i])).first;
    return it->second;
  };

  BaselineStats stats;
  for (std::uint64_t t = 0; t < trials; ++t) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(t >> 32)};
    Rng rng(seq);
    std::discrete_distribution<std::size_t> pick(p_n.probs.begin(), p_n.probs.end());
    std::vector<std::uint64_t> counts(p_n.support.size(), 0);
    for (std::uint64_t i = 0; i < l; ++i) ++counts[pick(rng)];
    HermitianOperator mix = HermitianOperator::zero(target.dim());
    for (std::size_t i = 0; i < counts.size(); ++i) {
      if (counts[i] != 0) mix += state(i) * (static_cast<double>(counts[i]) / static_cast<double>(l));
    }
    stats.trials.push_back(trace_distance(target, mix));
  }
  stats.min = *std::min_element(stats.trials.begin(), stats.trials.end());
  stats.max = *std::max_element(stats.trials.begin(), stats.trials.end());
  double sum = 0.0;
  for (double v : stats.trials) sum += v;
  stats.mean = sum / static_cast<double>(trials);
  return stats;
}

OracleResult brute_force_oracle(const CQChannel& ch, const std::vector<double>& p, std::uint64_t l) {
  if (l == 0) throw InputError("codebook size must be >= 1");
  const HermitianOperator target = output_mix(ch, p);
  std::vector<Symbol> support;
  for (Symbol x = 0; x < p.size(); ++x) {
    if (p[x] > 0.0) support.push_back(x);
  }
  // Multisets of size l over s symbols: C(s + l - 1, l).
  const std::size_t s = support.size();
  double count = 1.0;
  for (std::uint64_t i = 1; i <= l; ++i) {
    count = count * static_cast<double>(s - 1 + i) / static_cast<double>(i);
    if (count > static_cast<double>(kMaxOracleCodebooks)) {
      std::ostringstream os;
      os << "brute-force search space exceeds " << kMaxOracleCodebooks << " codebooks (" << s
         << " symbols, size " << l << ")";
      throw GuardrailError(os.str());
    }
  }

  OracleResult best;
  best.trace_dist = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> pick(l, 0);  // non-decreasing indices into support
  const double inv = 1.0 / static_cast<double>(l);
  while (true) {
    HermitianOperator mix = HermitianOperator::zero(target.dim());
    for (std::size_t i : pick) mix += ch.state(support[i]) * inv;
    const double dist = trace_distance(target, mix);
    if (dist < best.trace_dist) {
      best.trace_dist = dist;
      best.codebook.clear();
      for (std::size_t i : pick) best.codebook.push_back(support[i]);
    }
    std::size_t pos = l;
    while (pos > 0 && pick[pos - 1] == s - 1) --pos;
    if (pos == 0) break;
    ++pick[pos - 1];
    std::fill(pick.begin() + static_cast<std::ptrdiff_t>(pos), pick.end(), pick[pos - 1]);
  }
  return best;
}

}  // namespace resolvon
