#pragma once

// Classical-quantum channels, output mixtures and entropic quantities.

#include <cstddef>
#include <string>
#include <vector>

#include "resolvon/hermitian.hpp"
#include "resolvon/soft_cover.hpp"
#include "resolvon/types.hpp"

namespace resolvon {

inline constexpr double kDensityTol = 1e-10;
/// Largest dense tensor-power dimension the pipeline will build.
inline constexpr std::size_t kMaxAmbientDim = 4096;

/// x -> W_x, every W_x a density operator on a common output space.
class CQChannel {
 public:
  /// Validates each state: PSD and unit trace within 1e-10. Throws InputError
  /// naming the offending symbol.
  CQChannel(std::vector<std::string> labels, std::vector<HermitianOperator> states);

  std::size_t alphabet_size() const noexcept { return states_.size(); }
  std::size_t output_dim() const noexcept { return states_.front().dim(); }
  const HermitianOperator& state(Symbol x) const;
  const std::vector<HermitianOperator>& states() const noexcept { return states_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  /// dim^n, or GuardrailError when that exceeds kMaxAmbientDim.
  std::size_t ambient_dim(std::size_t n) const;
  /// W_{x^n} = W_{x_1} (x) ... (x) W_{x_n}.
  HermitianOperator sequence_state(const Sequence& xn) const;

 private:
  std::vector<std::string> labels_;
  std::vector<HermitianOperator> states_;
};

/// An explicit distribution over length-n input sequences.
struct SequenceDistribution {
  std::size_t n = 0;
  std::vector<Sequence> support;
  std::vector<double> probs;

  /// p^n over all k^n sequences with positive probability, lexicographic.
  static SequenceDistribution iid(const std::vector<double>& p, std::size_t n);
  /// Uniform on the type class.
  static SequenceDistribution uniform_on(const TypeClass& t);
  static SequenceDistribution point_mass(Sequence xn);

  /// Sum of probabilities of sequences of type t.
  double mass_of(const TypeClass& t, std::size_t alphabet_size) const;
  /// Restriction to the type class, renormalized. Empty support when the
  /// class has zero mass.
  SequenceDistribution restricted_to(const TypeClass& t, std::size_t alphabet_size) const;
};

/// Validates a probability vector of the given length (sum within 1e-12).
void validate_distribution(const std::vector<double>& p, std::size_t expected_size);

/// W_p = sum_x p(x) W_x.
HermitianOperator output_mix(const CQChannel& ch, const std::vector<double>& p);
/// W_{p_n} = sum_{x^n} p_n(x^n) W_{x^n}.
HermitianOperator output_mix(const CQChannel& ch, const SequenceDistribution& p);
/// (1/L) sum_l W_{x_l^n}.
HermitianOperator codebook_state(const CQChannel& ch, const std::vector<Sequence>& codebook);

/// -sum lambda ln lambda over eigenvalues above kDefaultRankTol, in nats.
double von_neumann_entropy(const HermitianOperator& rho);
/// sum_x p(x) H(W_x).
double conditional_entropy(const CQChannel& ch, const std::vector<double>& p);
/// H(W_p) - sum_x p(x) H(W_x).
double holevo_information(const CQChannel& ch, const std::vector<double>& p);

struct CapacityEstimate {
  double value;
  std::vector<double> argmax;
};

/// Maximizes the Holevo information over the simplex: a grid with
/// `grid_resolution` steps per axis, then pairwise coordinate ascent. Limited
/// to alphabets of at most 4 symbols.
CapacityEstimate holevo_capacity(const CQChannel& ch, std::size_t grid_resolution);

/// Single-letter hypergraph: edges W_x, weights p.
Hypergraph channel_hypergraph(const CQChannel& ch, const std::vector<double>& p);

}  // namespace resolvon
