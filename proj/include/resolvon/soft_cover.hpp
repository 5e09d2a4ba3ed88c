#pragma once

// Quantum hypergraph soft covering driven by matrix multiplicative weights.
//
// Given edges 0 <= E_x <= 1 and weights p, the codebook x_1..x_L is chosen
// greedily against the MMWU density so that E_C = (1/L) sum E_{x_l}
// approximates E_p = sum p(x) E_x in trace distance.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "resolvon/hermitian.hpp"
#include "resolvon/mmwu.hpp"

namespace resolvon {

inline constexpr double kEdgeTol = 1e-9;
inline constexpr double kWeightSumTol = 1e-12;
/// Relative window within which argmax candidates count as tied; the lowest
/// index among tied candidates wins.
inline constexpr double kArgmaxTieRtol = 1e-10;

using Codebook = std::vector<std::size_t>;

class Hypergraph {
 public:
  /// Validates 0 <= E_x <= 1 (within 1e-9), matching dimensions, and that the
  /// weights form a probability vector (sum within 1e-12, all >= 0).
  Hypergraph(std::vector<HermitianOperator> edges, std::vector<double> weights);

  std::size_t vertex_dim() const noexcept { return edges_.front().dim(); }
  std::size_t size() const noexcept { return edges_.size(); }
  const std::vector<HermitianOperator>& edges() const noexcept { return edges_; }
  const HermitianOperator& edge(std::size_t x) const { return edges_.at(x); }
  const std::vector<double>& weights() const noexcept { return weights_; }

  /// E_p = sum_x p(x) E_x.
  const HermitianOperator& weighted_edge() const noexcept { return weighted_; }
  /// max_x lambda_max(E_x); the smallest eta for which E_x <= eta * 1.
  double max_edge_eigenvalue() const noexcept { return max_edge_eigenvalue_; }

 private:
  std::vector<HermitianOperator> edges_;
  std::vector<double> weights_;
  HermitianOperator weighted_;
  double max_edge_eigenvalue_ = 0.0;
};

struct SoftCoverParams {
  double epsilon = 0.05;
  double tau = 0.05;
  double tau0 = 0.02;
  double eta = 1.0;

  /// epsilon, tau in (0, 1/2); tau0 in (0, 1/2 - tau); eta > 0.
  void validate() const;
};

struct ProjectorSplit {
  Projector pi1;     // eigenvalues of E_p strictly above the threshold
  Projector pi0;     // the rest, including the kernel of E_p
  double threshold;  // tau0 / vertex_dim
};

ProjectorSplit split_projectors(const Hypergraph& h, double tau0);

struct CostFamily {
  std::vector<HermitianOperator> costs;  // M(x), on the full vertex space
  std::vector<double> peaks;             // lambda_max(K_x)
  double d_max;                          // max_x ln lambda_max(K_x)
};

/// K_x = B^{-1/2} E_x^{Pi1} B^{-1/2} with B = E_p^{Pi1}, M(x) = K_x e^{-d_max}.
/// Throws InputError("degenerate pinched base") when B vanishes.
CostFamily compute_cost_family(const Hypergraph& h, const ProjectorSplit& split);

struct SizeRequirement {
  std::uint64_t rounds;  // ceiling of the formula, at least 1, saturated
  double exact;          // the formula value before rounding
  bool degenerate;       // ln(vertex_dim) = 0, so any L works
};

struct Theorem2Size {};
struct Lemma3Size {
  double d_max;
};
using SizeMode = std::variant<Theorem2Size, Lemma3Size>;

/// Theorem 2 mode: L >= eta dim ln(dim) / (epsilon^2 tau0).
/// Lemma 3 mode:   L >= e^{d_max} ln(dim) / epsilon^2.
SizeRequirement required_size(const SoftCoverParams& params, std::size_t vertex_dim,
                              SizeMode mode);

/// One-half trace norms of the three pieces of the triangle inequality
/// d(E_p, E_C) <= d(E_p, E_p^Pi1) + d(E_C^Pi1, E_C) + d(E_p^Pi1, E_C^Pi1).
struct TraceTerms {
  double base_pinch;      // (1/2)||E_p - E_p^Pi1||_1        <= tau0 / 2
  double codebook_pinch;  // (1/2)||E_C - E_C^Pi1||_1        <= sqrt(2e + t + t0)
  double core;            // (1/2)||E_p^Pi1 - E_C^Pi1||_1    <= 3(e + t + t0)
};

struct CoverCertificate {
  double d_max = 0.0;
  std::uint64_t l_used = 0;
  std::uint64_t l_required = 0;  // theorem 2 size
  bool l_required_degenerate = false;
  double trace_dist = 0.0;
  double theorem2_bound = 0.0;

  std::uint64_t lemma3_required = 0;
  std::optional<bool> lemma3_holds;  // evaluated only when l_used >= lemma3_required
  double lemma3_margin = 0.0;        // lambda_min(E_C^Pi1 - (1 - 2e) E_p^Pi1)

  std::optional<double> lemma2_min_margin;  // min_l Tr(F(l) M(x_l)) - e^{-d_max}
  std::optional<double> regret_gap;

  double lemma4_bound = 0.0;  // ln(eta dim / tau0)
  std::optional<bool> lemma4_holds;

  double threshold = 0.0;
  std::size_t pi1_rank = 0;
  double base_mass = 0.0;           // Tr(E_p)
  double base_mass_on_pi0 = 0.0;    // Tr(E_p^Pi0)
  double base_mass_on_pi0_bound = 0.0;  // tau0
  double codebook_mass_on_pi1 = 0.0;   // Tr(E_C^Pi1)
  double codebook_mass_floor = 0.0;    // 1 - 2e - t - t0
  double gentle_norm = 0.0;            // ||E_C - E_C^Pi1||_1
  double gentle_bound = 0.0;           // 2 sqrt(2e + t + t0)
  TraceTerms terms{};

  /// Labels of failed hypotheses: "eq1" (E_x <= eta 1), "eq2" (Tr E_p >= 1 - tau),
  /// "eq8" (L at least the theorem 2 size), "unit_trace_edges" (Tr E_x <= 1,
  /// which the trace-distance argument needs for the gentle-measurement step).
  std::vector<std::string> unmet_preconditions;
  /// Evaluated only when every precondition holds.
  std::optional<bool> theorem2_holds;

  /// Every inequality that was asserted holds. Unmet preconditions are not
  /// violations.
  bool certified() const;
  /// Human-readable names of the asserted inequalities that failed.
  std::vector<std::string> violations() const;
};

double theorem2_bound(const SoftCoverParams& params);

/// Incremental codebook construction. Every prefix of the codebook is exactly
/// what build_codebook would return for that length.
class CoverRun {
 public:
  CoverRun(Hypergraph h, SoftCoverParams params);

  /// Plays `rounds` more rounds.
  void advance(std::size_t rounds);

  const Hypergraph& hypergraph() const noexcept { return h_; }
  const SoftCoverParams& params() const noexcept { return params_; }
  const ProjectorSplit& split() const noexcept { return split_; }
  const CostFamily& costs() const noexcept { return costs_; }
  const MmwuState& engine() const noexcept { return engine_; }
  const Codebook& codebook() const noexcept { return codebook_; }
  /// Sum of E_{x_l} over the codebook so far.
  const HermitianOperator& edge_sum() const noexcept { return edge_sum_; }
  double lemma2_min_margin() const noexcept { return lemma2_min_margin_; }

  CoverCertificate certificate() const;

 private:
  std::size_t select() const;

  Hypergraph h_;
  SoftCoverParams params_;
  ProjectorSplit split_;
  CostFamily costs_;
  std::vector<CostMatrix> compressed_;  // costs restricted to range(Pi1)
  MmwuState engine_;
  Codebook codebook_;
  HermitianOperator edge_sum_;
  double lemma2_min_margin_;
};

struct CoverResult {
  Codebook codebook;
  CoverCertificate certificate;
};

CoverResult build_codebook(const Hypergraph& h, const SoftCoverParams& params, std::size_t rounds);

/// E_C = (1/L) sum_l E_{x_l}.
HermitianOperator mixed_edge(const Hypergraph& h, const Codebook& c);

/// Evaluates every theorem 2 sub-inequality for an existing codebook. The
/// MMWU-trajectory fields (lemma2_min_margin, regret_gap) stay empty.
CoverCertificate certify_theorem2(const Hypergraph& h, const SoftCoverParams& params,
                                  const Codebook& c);

}  // namespace resolvon
