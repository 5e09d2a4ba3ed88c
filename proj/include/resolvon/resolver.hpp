#pragma once

// Channel resolvability drivers: per-type codebooks built by soft covering on
// typicality-pinched edges, the type-mixture composition for general input
// distributions, a random-coding baseline and an exhaustive oracle.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "resolvon/channel.hpp"
#include "resolvon/soft_cover.hpp"
#include "resolvon/typicality.hpp"
#include "resolvon/types.hpp"

namespace resolvon {

/// Largest codebook the drivers will build when sizing automatically.
inline constexpr std::uint64_t kMaxAutoCodebookSize = 1'000'000;

/// The fixed-type error bound, term by term.
struct BoundTerms {
  double epsilon_term = 0.0;  // 3 epsilon
  double tau_term = 0.0;      // 3 tau
  double tau0_term = 0.0;     // 7/2 tau0
  double root_term = 0.0;     // sqrt(2 epsilon + tau + tau0)
  double unpinch_term = 0.0;  // 2 sqrt(tau) + sqrt(2 tau)

  double total() const noexcept {
    return epsilon_term + tau_term + tau0_term + root_term + unpinch_term;
  }
};

BoundTerms fixed_type_bound_terms(const SoftCoverParams& params);

struct ResolvabilityReport {
  TypeClass type;
  std::size_t ambient_dim = 0;
  std::size_t vertex_dim = 0;  // rank of the output-typical projector
  std::size_t edge_count = 0;  // members of the type class with positive weight

  double alpha = 0.0;         // conditional window
  double alpha_output = 0.0;  // alpha sqrt(|X|), output window
  double eta = 0.0;
  double output_entropy = 0.0;       // H(W_T)
  double conditional_entropy = 0.0;  // H(W|T)
  double holevo_info = 0.0;          // I(T, W)

  double trace_dist = 0.0;  // on the original, unpinched output states
  double bound = 0.0;
  BoundTerms terms;
  double d_max = 0.0;
  std::uint64_t codebook_size = 0;
  std::uint64_t required_size = 0;  // rank-based: eta dim ln dim / (eps^2 tau0)
  /// ln of the closed-form size with n ln dim(H) and the entropy exponent;
  /// empty when n ln dim(H) = 0.
  std::optional<double> required_size_literal_log;

  double edge_gap_max = 0.0;  // max_x ||Q_x - W_x||_1
  double edge_gap_bound = 0.0;
  double min_edge_trace = 0.0;  // min_x Tr Q_x
  double edge_trace_floor = 0.0;

  CoverCertificate cover;
  std::optional<double> baseline_trace_dist;

  std::vector<std::string> violations() const;
};

/// A fixed-type instance: the pinched hypergraph on the output-typical
/// subspace, plus the original states needed to score codebooks.
class FixedTypeInstance {
 public:
  /// `p_t` defaults to uniform on the type class; otherwise it must be
  /// supported on the class. `params.eta` is ignored and replaced by the
  /// typicality-derived value.
  FixedTypeInstance(const CQChannel& ch, TypeClass t, const SoftCoverParams& params,
                    std::optional<SequenceDistribution> p_t = std::nullopt);

  const CQChannel& channel() const noexcept { return ch_; }
  const TypeClass& type() const noexcept { return type_; }
  const SoftCoverParams& params() const noexcept { return params_; }
  const std::vector<Sequence>& members() const noexcept { return members_; }
  const Hypergraph& hypergraph() const noexcept { return hypergraph_; }
  const HermitianOperator& target_state() const noexcept { return target_; }

  CoverRun start() const { return CoverRun(hypergraph_, params_); }
  std::vector<Sequence> codebook_of(const CoverRun& run) const;
  ResolvabilityReport report(const CoverRun& run) const;

 private:
  struct Prepared;
  static Prepared prepare(const CQChannel& ch, const TypeClass& t, SoftCoverParams& params,
                          const std::optional<SequenceDistribution>& p_t);
  FixedTypeInstance(const CQChannel& ch, TypeClass t, const SoftCoverParams& params, Prepared prepared);

  CQChannel ch_;
  TypeClass type_;
  SoftCoverParams params_;
  std::vector<Sequence> members_;
  std::vector<double> weights_;
  ProductSubspace vertex_;
  Hypergraph hypergraph_;
  HermitianOperator target_;
  ResolvabilityReport base_;
};

struct FixedTypeResult {
  std::vector<Sequence> codebook;
  ResolvabilityReport report;
};

/// Builds a codebook of size `l`, or of the rank-based required size when
/// absent (GuardrailError above kMaxAutoCodebookSize).
FixedTypeResult fixed_type_resolve(const CQChannel& ch, const TypeClass& t,
                                   const SoftCoverParams& params,
                                   std::optional<std::uint64_t> l = std::nullopt,
                                   std::optional<SequenceDistribution> p_t = std::nullopt);

struct GeneralResolveParams {
  SoftCoverParams cover;
  /// Per-type codebook size; the rank-based required size when absent.
  std::optional<std::uint64_t> per_type_size;
  /// Step size of the type-distribution simulation. Its total variation
  /// shrinks like ln(#types) / (epsilon R min_T p(T)) in the round count R,
  /// so the largest admissible step converges fastest.
  double type_epsilon = 0.45;
  /// Stop simulating the type distribution once its total variation is at
  /// most this value.
  double type_tv_target = 0.02;
  std::uint64_t max_type_rounds = 8192;
};

struct TypeComponent {
  TypeClass type;
  double weight = 0.0;             // p_n(X_T^n)
  std::uint64_t multiplicity = 0;  // rounds allotted by the type simulation
  ResolvabilityReport report;
};

struct GeneralResolveReport {
  std::size_t n = 0;
  double trace_dist = 0.0;
  double bound = 0.0;  // type_tv + max per-type bound
  double type_tv = 0.0;
  double type_tv_target = 0.0;
  double type_epsilon = 0.0;
  std::uint64_t type_rounds = 0;
  std::uint64_t per_type_size = 0;
  std::uint64_t codebook_size = 0;
  std::optional<CoverCertificate> type_cover;  // absent with a single type
  std::vector<TypeComponent> components;  // only types with multiplicity > 0

  std::vector<std::string> violations() const;
};

/// The concatenated codebook is every per-type codebook repeated by its
/// multiplicity, in component order.
struct GeneralResolveResult {
  std::vector<std::vector<Sequence>> type_codebooks;  // parallel to report.components
  GeneralResolveReport report;

  std::vector<Sequence> expanded_codebook() const;
};

/// Splits p_n by type, simulates the type distribution with multiplicative
/// weights over diagonal costs, and concatenates per-type codebooks, each
/// repeated by its type multiplicity.
GeneralResolveResult general_resolve(const CQChannel& ch, const SequenceDistribution& p_n,
                                     const GeneralResolveParams& params);

struct BaselineStats {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::vector<double> trials;
};

/// Draws `l` codewords i.i.d. from p_n per trial, trial t using a stream
/// seeded from (seed, t), and scores d_tr(W_{p_n}, W_C).
BaselineStats random_baseline(const CQChannel& ch, const SequenceDistribution& p_n,
                              std::uint64_t l, std::uint64_t seed, std::uint64_t trials);

struct OracleResult {
  Codebook codebook;
  double trace_dist = 0.0;
};

/// Minimizes d_tr(W_p, W_C) over every size-l multiset of supported symbols.
OracleResult brute_force_oracle(const CQChannel& ch, const std::vector<double>& p, std::uint64_t l);

}  // namespace resolvon
