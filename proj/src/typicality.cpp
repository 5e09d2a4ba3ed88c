#include "resolvon/typicality.hpp"

#include <cmath>
#include <sstream>

#include "resolvon/error.hpp"

namespace resolvon {

namespace {

constexpr double kInvE = 0.36787944117144233;

std::size_t checked_power(std::size_t d, std::size_t n) {
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    total *= d;
    if (total > kMaxAmbientDim) {
      std::ostringstream os;
      os << "ambient dimension " << d << "^" << n << " exceeds the limit of " << kMaxAmbientDim;
      throw GuardrailError(os.str());
    }
  }
  return total;
}

// Calls visit(seq) for every sequence in {0..d-1}^n, lexicographically.
template <typename Visit>
void for_each_index_sequence(std::size_t d, std::size_t n, Visit&& visit) {
  const std::size_t total = checked_power(d, n);
  std::vector<std::uint32_t> seq(n, 0);
  for (std::size_t s = 0; s < total; ++s) {
    visit(seq);
    for (std::size_t i = n; i-- > 0;) {
      if (++seq[i] < d) break;
      seq[i] = 0;
    }
  }
}

}  // namespace

void TypicalitySpec::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    std::ostringstream os;
    os << "typicality alpha must be a positive finite number, got " << alpha;
    throw InputError(os.str());
  }
  if (n == 0) throw InputError("block length n must be >= 1");
}

bool within_window(std::size_t count, std::size_t n, double r, double alpha) {
  if (r <= kDefaultRankTol) return count == 0;
  const double nd = static_cast<double>(n);
  const double variance = std::max(0.0, nd * r * (1.0 - r));
  const double slack = 1e-9 * std::max(1.0, nd);
  return std::abs(static_cast<double>(count) - nd * r) <= alpha * std::sqrt(variance) + slack;
}

ProductSubspace::ProductSubspace(std::vector<ComplexMatrix> bases,
                                 std::vector<RealVector> eigenvalues,
                                 std::vector<std::vector<std::uint32_t>> selected)
    : bases_(std::move(bases)), eigenvalues_(std::move(eigenvalues)), selected_(std::move(selected)) {
  if (bases_.empty()) throw InputError("product subspace needs at least one position");
  if (eigenvalues_.size() != bases_.size()) throw InputError("product subspace: eigenvalue count mismatch");
  for (const auto& s : selected_) {
    if (s.size() != bases_.size()) throw InputError("product subspace: index sequence length mismatch");
  }
}

double ProductSubspace::weight(std::size_t k) const {
  double w = 1.0;
  for (std::size_t i = 0; i < n(); ++i) w *= eigenvalues_[i](selected_.at(k)[i]);
  return w;
}

ComplexVector ProductSubspace::vector(std::size_t k) const {
  const auto& s = selected_.at(k);
  ComplexVector v = bases_[0].col(s[0]);
  for (std::size_t i = 1; i < n(); ++i) {
    const ComplexVector next = bases_[i].col(s[i]);
    ComplexVector out(v.size() * next.size());
    for (Eigen::Index a = 0; a < v.size(); ++a) out.segment(a * next.size(), next.size()) = v(a) * next;
    v = std::move(out);
  }
  return v;
}

ComplexMatrix ProductSubspace::basis() const {
  const std::size_t ambient = checked_power(local_dim(), n());
  ComplexMatrix b(ambient, rank());
  for (std::size_t k = 0; k < rank(); ++k) b.col(k) = vector(k);
  return b;
}

Projector ProductSubspace::projector() const {
  if (rank() == 0) return Projector::zero(checked_power(local_dim(), n()));
  return Projector::onto(basis());
}

ComplexMatrix ProductSubspace::overlap(const ProductSubspace& other) const {
  if (other.n() != n() || other.local_dim() != local_dim()) {
    throw InputError("product subspaces live in different spaces");
  }
  std::vector<ComplexMatrix> local(n());
  for (std::size_t i = 0; i < n(); ++i) local[i] = bases_[i].adjoint() * other.bases_[i];
  ComplexMatrix g(rank(), other.rank());
  for (std::size_t k = 0; k < rank(); ++k) {
    const auto& a = selected_[k];
    for (std::size_t j = 0; j < other.rank(); ++j) {
      const auto& b = other.selected_[j];
      Complex z(1.0, 0.0);
      for (std::size_t i = 0; i < n() && z != Complex(0.0, 0.0); ++i) z *= local[i](a[i], b[i]);
      g(k, j) = z;
    }
  }
  return g;
}

double ProductSubspace::trace_against(const std::vector<const HermitianOperator*>& local_states) const {
  if (local_states.size() != n()) throw InputError("trace_against: one state per position required");
  std::vector<RealVector> diag(n());
  for (std::size_t i = 0; i < n(); ++i) {
    diag[i] = (bases_[i].adjoint() * local_states[i]->matrix() * bases_[i]).diagonal().real();
  }
  double total = 0.0;
  for (const auto& s : selected_) {
    double term = 1.0;
    for (std::size_t i = 0; i < n(); ++i) term *= diag[i](s[i]);
    total += term;
  }
  return total;
}

ProductSubspace typical_subspace(const HermitianOperator& rho, const TypicalitySpec& spec) {
  spec.validate();
  const SpectralDecomposition dec = spectral_decompose(rho);
  const std::size_t d = rho.dim();
  std::vector<std::vector<std::uint32_t>> selected;
  std::vector<std::size_t> counts(d);
  for_each_index_sequence(d, spec.n, [&](const std::vector<std::uint32_t>& seq) {
    std::fill(counts.begin(), counts.end(), 0);
    for (std::uint32_t j : seq) ++counts[j];
    for (std::size_t j = 0; j < d; ++j) {
      if (!within_window(counts[j], spec.n, dec.eigenvalues(j), spec.alpha)) return;
    }
    selected.push_back(seq);
  });
  return ProductSubspace(std::vector<ComplexMatrix>(spec.n, dec.eigenvectors),
                         std::vector<RealVector>(spec.n, dec.eigenvalues), std::move(selected));
}

Projector typical_projector(const HermitianOperator& rho, const TypicalitySpec& spec) {
  return typical_subspace(rho, spec).projector();
}

ProductSubspace conditional_typical_subspace(const CQChannel& ch, const Sequence& xn,
                                             const TypicalitySpec& spec) {
  spec.validate();
  if (xn.size() != spec.n) {
    throw InputError("sequence length " + std::to_string(xn.size()) + " differs from n = " +
                     std::to_string(spec.n));
  }
  const std::size_t d = ch.output_dim();
  const std::size_t k = ch.alphabet_size();
  std::vector<SpectralDecomposition> dec;
  for (Symbol x = 0; x < k; ++x) dec.push_back(spectral_decompose(ch.states()[x]));
  const TypeClass t = type_of(xn, k);

  std::vector<std::vector<std::uint32_t>> selected;
  std::vector<std::size_t> counts(k * d);
  for_each_index_sequence(d, spec.n, [&](const std::vector<std::uint32_t>& seq) {
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < spec.n; ++i) ++counts[xn[i] * d + seq[i]];
    for (Symbol x = 0; x < k; ++x) {
      if (t.counts[x] == 0) continue;
      for (std::size_t j = 0; j < d; ++j) {
        if (!within_window(counts[x * d + j], t.counts[x], dec[x].eigenvalues(j), spec.alpha)) return;
      }
    }
    selected.push_back(seq);
  });

  std::vector<ComplexMatrix> bases;
  std::vector<RealVector> eigenvalues;
  for (Symbol x : xn) {
    bases.push_back(dec[x].eigenvectors);
    eigenvalues.push_back(dec[x].eigenvalues);
  }
  return ProductSubspace(std::move(bases), std::move(eigenvalues), std::move(selected));
}

Projector conditional_typical_projector(const CQChannel& ch, const Sequence& xn,
                                        const TypicalitySpec& spec) {
  return conditional_typical_subspace(ch, xn, spec).projector();
}

HermitianOperator type_output_state(const CQChannel& ch, const TypeClass& t) {
  if (t.alphabet_size() != ch.alphabet_size()) {
    throw InputError("type has " + std::to_string(t.alphabet_size()) +
                     " symbols but the channel alphabet has " + std::to_string(ch.alphabet_size()));
  }
  return output_mix(ch, t.distribution());
}

ProductSubspace output_typical_subspace(const CQChannel& ch, const TypeClass& t, double alpha) {
  const double scaled = alpha * std::sqrt(static_cast<double>(ch.alphabet_size()));
  return typical_subspace(type_output_state(ch, t), TypicalitySpec{scaled, t.n});
}

HermitianOperator compressed_edge_Q(const ProductSubspace& vertex,
                                    const ProductSubspace& conditional) {
  if (vertex.rank() == 0) throw NumericalError("empty vertex space");
  const ComplexMatrix a = vertex.overlap(conditional);
  RealVector w(conditional.rank());
  for (std::size_t j = 0; j < conditional.rank(); ++j) w(j) = std::max(0.0, conditional.weight(j));
  return HermitianOperator(a * w.asDiagonal() * a.adjoint());
}

HermitianOperator build_edge_Q(const CQChannel& ch, const Sequence& xn, const TypicalitySpec& spec) {
  const TypeClass t = type_of(xn, ch.alphabet_size());
  const ProductSubspace vertex = output_typical_subspace(ch, t, spec.alpha);
  const ProductSubspace cond = conditional_typical_subspace(ch, xn, spec);
  const ComplexMatrix v = vertex.basis();
  if (vertex.rank() == 0) return HermitianOperator::zero(v.rows());
  return HermitianOperator(v * compressed_edge_Q(vertex, cond).matrix() * v.adjoint());
}

double typical_rank_bound(double entropy, std::size_t dim, double alpha, std::size_t n) {
  const double nd = static_cast<double>(n);
  return std::exp(nd * entropy + kInvE * static_cast<double>(dim) * alpha * std::sqrt(nd));
}

double conditional_mass_floor(std::size_t dim, std::size_t alphabet_size, double alpha) {
  return 1.0 - static_cast<double>(dim * alphabet_size) / (alpha * alpha);
}

double conditional_eigenvalue_ceiling(double conditional_entropy, std::size_t dim,
                                      std::size_t alphabet_size, double alpha, std::size_t n) {
  const double nd = static_cast<double>(n);
  return std::exp(-nd * conditional_entropy +
                  kInvE * static_cast<double>(dim * alphabet_size) * alpha * std::sqrt(nd));
}

double edge_trace_floor(std::size_t dim, std::size_t alphabet_size, double alpha) {
  return 1.0 - 2.0 * static_cast<double>(dim * alphabet_size) / (alpha * alpha);
}

double resolvability_alpha(std::size_t dim, std::size_t alphabet_size, double tau) {
  if (!(tau > 0.0)) throw InputError("tau must be positive");
  return std::sqrt(2.0 * static_cast<double>(dim * alphabet_size) / tau);
}

}  // namespace resolvon
