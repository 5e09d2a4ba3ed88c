#include "resolvon/soft_cover.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "resolvon/error.hpp"

namespace resolvon {

namespace {

constexpr double kSaturatedRounds = 1e18;

std::uint64_t ceil_rounds(double exact) {
  if (!(exact < kSaturatedRounds)) return static_cast<std::uint64_t>(kSaturatedRounds);
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(exact)));
}

HermitianOperator weighted_sum(const std::vector<HermitianOperator>& edges,
                               const std::vector<double>& weights) {
  HermitianOperator sum = HermitianOperator::zero(edges.front().dim());
  for (std::size_t x = 0; x < edges.size(); ++x) {
    if (weights[x] != 0.0) sum += weights[x] * edges[x];
  }
  return sum;
}

CoverCertificate evaluate(const Hypergraph& h, const SoftCoverParams& params,
                          const ProjectorSplit& split, const CostFamily& costs,
                          std::size_t rounds, const HermitianOperator& edge_sum) {
  if (rounds == 0) throw InputError("certificate requires a non-empty codebook");
  const std::size_t dim = h.vertex_dim();
  const double eps = params.epsilon;
  const double slack = params.tau + params.tau0;

  CoverCertificate c;
  c.d_max = costs.d_max;
  c.l_used = rounds;
  const SizeRequirement thm2 = required_size(params, dim, Theorem2Size{});
  c.l_required = thm2.rounds;
  c.l_required_degenerate = thm2.degenerate;
  c.lemma3_required = required_size(params, dim, Lemma3Size{costs.d_max}).rounds;
  c.theorem2_bound = theorem2_bound(params);
  c.threshold = split.threshold;
  c.pi1_rank = split.pi1.rank();

  const HermitianOperator& base = h.weighted_edge();
  const HermitianOperator mixed = edge_sum * (1.0 / static_cast<double>(rounds));
  c.trace_dist = trace_distance(base, mixed);

  const HermitianOperator base1 = pinch(base, split.pi1);
  const HermitianOperator mixed1 = pinch(mixed, split.pi1);
  c.lemma3_margin = min_eigenvalue(mixed1 - (1.0 - 2.0 * eps) * base1);
  if (rounds >= c.lemma3_required) c.lemma3_holds = c.lemma3_margin >= -1e-8;

  c.base_mass = base.trace();
  c.base_mass_on_pi0 = pinch(base, split.pi0).trace();
  c.base_mass_on_pi0_bound = params.tau0;
  c.codebook_mass_on_pi1 = mixed1.trace();
  c.codebook_mass_floor = 1.0 - 2.0 * eps - slack;
  c.terms.base_pinch = trace_distance(base, base1);
  c.terms.codebook_pinch = trace_distance(mixed, mixed1);
  c.terms.core = trace_distance(base1, mixed1);
  c.gentle_norm = 2.0 * c.terms.codebook_pinch;
  c.gentle_bound = 2.0 * std::sqrt(2.0 * eps + slack);

  const bool eq1 = h.max_edge_eigenvalue() <= params.eta + kEdgeTol;
  const bool eq2 = c.base_mass >= 1.0 - params.tau - 1e-12;
  const bool eq8 = rounds >= c.l_required;
  bool unit_trace = true;
  for (const auto& e : h.edges()) unit_trace = unit_trace && e.trace() <= 1.0 + kEdgeTol;
  if (!eq1) c.unmet_preconditions.emplace_back("eq1");
  if (!eq2) c.unmet_preconditions.emplace_back("eq2");
  if (!eq8) c.unmet_preconditions.emplace_back("eq8");
  if (!unit_trace) c.unmet_preconditions.emplace_back("unit_trace_edges");

  c.lemma4_bound = std::log(params.eta * static_cast<double>(dim) / params.tau0);
  if (eq1) c.lemma4_holds = c.d_max <= c.lemma4_bound + 1e-9;
  if (c.unmet_preconditions.empty()) c.theorem2_holds = c.trace_dist <= c.theorem2_bound + 1e-12;
  return c;
}

}  // namespace

Hypergraph::Hypergraph(std::vector<HermitianOperator> edges, std::vector<double> weights)
    : edges_(std::move(edges)),
      weights_(std::move(weights)),
      weighted_(HermitianOperator::zero(1)) {
  if (edges_.empty()) throw InputError("hypergraph index set is empty");
  if (weights_.size() != edges_.size()) {
    throw InputError("hypergraph needs one weight per edge");
  }
  const std::size_t dim = edges_.front().dim();
  double total = 0.0;
  for (std::size_t x = 0; x < edges_.size(); ++x) {
    if (edges_[x].dim() != dim) throw InputError("hypergraph edges differ in dimension");
    const RealVector ev = eigenvalues_of(edges_[x]);
    if (ev(ev.size() - 1) < -kEdgeTol || ev(0) > 1.0 + kEdgeTol) {
      std::ostringstream os;
      os << "edge " << x << " violates 0 <= E <= 1 (eigenvalues in [" << ev(ev.size() - 1)
         << ", " << ev(0) << "])";
      throw InputError(os.str());
    }
    max_edge_eigenvalue_ = std::max(max_edge_eigenvalue_, ev(0));
    if (!(weights_[x] >= 0.0)) {
      std::ostringstream os;
      os << "weight " << x << " is negative";
      throw InputError(os.str());
    }
    total += weights_[x];
  }
  if (std::abs(total - 1.0) > kWeightSumTol) {
    std::ostringstream os;
    os.precision(17);
    os << "hypergraph weights sum to " << total << ", not 1";
    throw InputError(os.str());
  }
  weighted_ = weighted_sum(edges_, weights_);
}

void SoftCoverParams::validate() const {
  auto fail = [](const std::string& what) { throw InputError(what); };
  if (!(epsilon > 0.0 && epsilon < 0.5)) fail("epsilon must lie in (0, 1/2)");
  if (!(tau > 0.0 && tau < 0.5)) fail("tau must lie in (0, 1/2)");
  if (!(tau0 > 0.0 && tau0 < 0.5 - tau)) fail("tau0 must lie in (0, 1/2 - tau)");
  if (!(eta > 0.0) || !std::isfinite(eta)) fail("eta must be positive and finite");
}

double theorem2_bound(const SoftCoverParams& p) {
  return 3.0 * p.epsilon + 3.0 * p.tau + 3.5 * p.tau0 +
         std::sqrt(2.0 * p.epsilon + p.tau + p.tau0);
}

ProjectorSplit split_projectors(const Hypergraph& h, double tau0) {
  if (!(tau0 > 0.0)) throw InputError("tau0 must be positive");
  const SpectralDecomposition d = spectral_decompose(h.weighted_edge());
  const double threshold = tau0 / static_cast<double>(h.vertex_dim());
  Eigen::Index above = 0;
  while (above < d.eigenvalues.size() && d.eigenvalues(above) > threshold) ++above;
  const Eigen::Index n = d.eigenvalues.size();
  return ProjectorSplit{Projector::onto(d.eigenvectors.leftCols(above)),
                        Projector::onto(d.eigenvectors.rightCols(n - above)), threshold};
}

CostFamily compute_cost_family(const Hypergraph& h, const ProjectorSplit& split) {
  if (split.pi1.rank() == 0) throw InputError("degenerate pinched base");
  const HermitianOperator base1 = pinch(h.weighted_edge(), split.pi1);
  const HermitianOperator inv_sqrt = apply_spectral_function(base1, spectral::GenInvSqrt{});

  std::vector<HermitianOperator> ks;
  CostFamily out;
  ks.reserve(h.size());
  out.peaks.reserve(h.size());
  double peak = 0.0;
  for (const auto& e : h.edges()) {
    const HermitianOperator pinched = pinch(e, split.pi1);
    ks.emplace_back(inv_sqrt.matrix() * pinched.matrix() * inv_sqrt.matrix());
    out.peaks.push_back(max_eigenvalue(ks.back()));
    peak = std::max(peak, out.peaks.back());
  }
  if (!(peak > 0.0)) throw InputError("degenerate pinched base");
  out.d_max = std::log(peak);
  const double scale = 1.0 / peak;
  out.costs.reserve(ks.size());
  for (auto& k : ks) out.costs.push_back(std::move(k) * scale);
  return out;
}

SizeRequirement required_size(const SoftCoverParams& params, std::size_t vertex_dim,
                              SizeMode mode) {
  if (vertex_dim == 0) throw InputError("vertex dimension must be >= 1");
  const double log_dim = std::log(static_cast<double>(vertex_dim));
  const double eps2 = params.epsilon * params.epsilon;
  double exact = 0.0;
  if (std::holds_alternative<Theorem2Size>(mode)) {
    exact = params.eta * static_cast<double>(vertex_dim) * log_dim / (eps2 * params.tau0);
  } else {
    const double d_max = std::get<Lemma3Size>(mode).d_max;
    if (!std::isfinite(d_max)) throw InputError("lemma 3 size needs a finite d_max");
    exact = std::exp(d_max) * log_dim / eps2;
  }
  return SizeRequirement{ceil_rounds(exact), exact, vertex_dim == 1};
}

bool CoverCertificate::certified() const { return violations().empty(); }

std::vector<std::string> CoverCertificate::violations() const {
  std::vector<std::string> v;
  if (lemma2_min_margin && *lemma2_min_margin < -1e-9) v.emplace_back("lemma2_margin");
  if (regret_gap && *regret_gap < -1e-8) v.emplace_back("regret_gap");
  if (lemma3_holds && !*lemma3_holds) v.emplace_back("lemma3_operator_inequality");
  if (lemma4_holds && !*lemma4_holds) v.emplace_back("lemma4_d_max_bound");
  if (unmet_preconditions.empty()) {
    if (base_mass_on_pi0 > base_mass_on_pi0_bound + 1e-9) v.emplace_back("base_mass_on_pi0");
    if (codebook_mass_on_pi1 < codebook_mass_floor - 1e-9) v.emplace_back("codebook_mass_on_pi1");
    if (gentle_norm > gentle_bound + 1e-9) v.emplace_back("gentle_measurement");
    if (theorem2_holds && !*theorem2_holds) v.emplace_back("theorem2_trace_distance");
  }
  return v;
}

CoverRun::CoverRun(Hypergraph h, SoftCoverParams params)
    : h_(std::move(h)),
      params_((params.validate(), params)),
      split_(split_projectors(h_, params_.tau0)),
      costs_(compute_cost_family(h_, split_)),
      engine_(params_.epsilon, split_.pi1.rank()),
      edge_sum_(HermitianOperator::zero(h_.vertex_dim())),
      lemma2_min_margin_(std::numeric_limits<double>::infinity()) {
  compressed_.reserve(costs_.costs.size());
  for (const auto& m : costs_.costs) compressed_.emplace_back(m.compress(split_.pi1.basis()));
}

std::size_t CoverRun::select() const {
  const HermitianOperator& f = engine_.density();
  std::vector<double> gains(compressed_.size());
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t x = 0; x < compressed_.size(); ++x) {
    gains[x] = trace_of_product(f, compressed_[x].op());
    best = std::max(best, gains[x]);
  }
  const double floor = best - kArgmaxTieRtol * std::abs(best);
  for (std::size_t x = 0; x < gains.size(); ++x) {
    if (gains[x] >= floor) return x;
  }
  return 0;
}

void CoverRun::advance(std::size_t rounds) {
  const double target = std::exp(-costs_.d_max);
  for (std::size_t i = 0; i < rounds; ++i) {
    const std::size_t x = select();
    const double paid = engine_.step(compressed_[x]);
    lemma2_min_margin_ = std::min(lemma2_min_margin_, paid - target);
    edge_sum_ += h_.edge(x);
    codebook_.push_back(x);
  }
}

CoverCertificate CoverRun::certificate() const {
  CoverCertificate c = evaluate(h_, params_, split_, costs_, codebook_.size(), edge_sum_);
  c.lemma2_min_margin = lemma2_min_margin_;
  c.regret_gap = engine_.regret_gap();
  return c;
}

CoverResult build_codebook(const Hypergraph& h, const SoftCoverParams& params,
                           std::size_t rounds) {
  if (rounds == 0) throw InputError("codebook size must be >= 1");
  CoverRun run(h, params);
  run.advance(rounds);
  return CoverResult{run.codebook(), run.certificate()};
}

HermitianOperator mixed_edge(const Hypergraph& h, const Codebook& c) {
  if (c.empty()) throw InputError("codebook is empty");
  HermitianOperator sum = HermitianOperator::zero(h.vertex_dim());
  for (std::size_t x : c) {
    if (x >= h.size()) {
      std::ostringstream os;
      os << "codeword " << x << " does not index an edge";
      throw InputError(os.str());
    }
    sum += h.edge(x);
  }
  return sum * (1.0 / static_cast<double>(c.size()));
}

CoverCertificate certify_theorem2(const Hypergraph& h, const SoftCoverParams& params,
                                  const Codebook& c) {
  params.validate();
  const ProjectorSplit split = split_projectors(h, params.tau0);
  const CostFamily costs = compute_cost_family(h, split);
  const HermitianOperator sum = mixed_edge(h, c) * static_cast<double>(c.size());
  return evaluate(h, params, split, costs, c.size(), sum);
}

}  // namespace resolvon
