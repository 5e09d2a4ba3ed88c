#pragma once

// Frequency-typical subspaces of tensor-power and tensor-product states.
//
// Every subspace here is spanned by product vectors e_{j_1} (x) ... (x) e_{j_n}
// drawn from per-position eigenbases, so it is stored as a list of index
// sequences. Dense ambient matrices are only built on request.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "resolvon/channel.hpp"
#include "resolvon/hermitian.hpp"
#include "resolvon/types.hpp"

namespace resolvon {

struct TypicalitySpec {
  double alpha = 1.0;
  std::size_t n = 1;

  void validate() const;
};

/// |N - n r| <= alpha sqrt(n r (1 - r)), with a 1e-9 max(1, n) slack so that
/// counts sitting exactly on the boundary are kept. Eigenvalues r at or below
/// kDefaultRankTol admit only N = 0.
bool within_window(std::size_t count, std::size_t n, double r, double alpha);

/// Span of selected product vectors over per-position orthonormal bases.
class ProductSubspace {
 public:
  /// `bases[i]` holds the eigenvectors used at position i as columns and
  /// `eigenvalues[i]` their eigenvalues; `selected` lists index sequences.
  ProductSubspace(std::vector<ComplexMatrix> bases, std::vector<RealVector> eigenvalues,
                  std::vector<std::vector<std::uint32_t>> selected);

  std::size_t n() const noexcept { return bases_.size(); }
  std::size_t local_dim() const noexcept { return bases_.front().rows(); }
  std::size_t rank() const noexcept { return selected_.size(); }
  const std::vector<std::vector<std::uint32_t>>& selected() const noexcept { return selected_; }

  /// Product of the per-position eigenvalues along the k-th selected sequence:
  /// the eigenvalue of the underlying product state on that vector.
  double weight(std::size_t k) const;

  /// The k-th spanning vector in the ambient space.
  ComplexVector vector(std::size_t k) const;
  /// All spanning vectors as columns (ambient_dim x rank).
  ComplexMatrix basis() const;
  Projector projector() const;

  /// Gram matrix <u_k | v_j> between this subspace's vectors and `other`'s,
  /// computed from per-position overlaps without touching the ambient space.
  ComplexMatrix overlap(const ProductSubspace& other) const;

  /// Tr(P (rho_1 (x) ... (x) rho_n)) for per-position states.
  double trace_against(const std::vector<const HermitianOperator*>& local_states) const;

 private:
  std::vector<ComplexMatrix> bases_;
  std::vector<RealVector> eigenvalues_;
  std::vector<std::vector<std::uint32_t>> selected_;
};

/// Eigen-sequences of rho^{(x) n} whose eigenvalue counts fall in the window.
ProductSubspace typical_subspace(const HermitianOperator& rho, const TypicalitySpec& spec);
Projector typical_projector(const HermitianOperator& rho, const TypicalitySpec& spec);

/// For each symbol x, eigen-sequences of W_x across the positions carrying x
/// whose counts fall in the window scaled by n_x = N(x | x^n).
ProductSubspace conditional_typical_subspace(const CQChannel& ch, const Sequence& xn,
                                             const TypicalitySpec& spec);
Projector conditional_typical_projector(const CQChannel& ch, const Sequence& xn,
                                        const TypicalitySpec& spec);

/// W_T: the output state at the empirical distribution of t.
HermitianOperator type_output_state(const CQChannel& ch, const TypeClass& t);

/// The output-typical subspace of W_T with the alpha sqrt(|X|) window; it is
/// the vertex space of the fixed-type hypergraph.
ProductSubspace output_typical_subspace(const CQChannel& ch, const TypeClass& t, double alpha);

/// Q restricted to the span of `vertex`, in the coordinates of its spanning
/// vectors: A diag(w) A^dagger with A = <vertex | conditional>.
HermitianOperator compressed_edge_Q(const ProductSubspace& vertex,
                                    const ProductSubspace& conditional);

/// Q_{x^n} = Pi_T Pi(x^n) W_{x^n} Pi(x^n) Pi_T in the ambient space.
HermitianOperator build_edge_Q(const CQChannel& ch, const Sequence& xn, const TypicalitySpec& spec);

// Closed-form sides of the typicality inequalities.

/// exp(n H + (1/e) dim alpha sqrt(n)).
double typical_rank_bound(double entropy, std::size_t dim, double alpha, std::size_t n);
/// 1 - dim |X| / alpha^2.
double conditional_mass_floor(std::size_t dim, std::size_t alphabet_size, double alpha);
/// exp(-n H(W|T) + (1/e) dim |X| alpha sqrt(n)).
double conditional_eigenvalue_ceiling(double conditional_entropy, std::size_t dim,
                                      std::size_t alphabet_size, double alpha, std::size_t n);
/// 1 - 2 dim |X| / alpha^2.
double edge_trace_floor(std::size_t dim, std::size_t alphabet_size, double alpha);
/// sqrt(2 dim |X| / tau).
double resolvability_alpha(std::size_t dim, std::size_t alphabet_size, double tau);

}  // namespace resolvon
