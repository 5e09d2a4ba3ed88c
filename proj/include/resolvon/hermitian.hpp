#pragma once

// Dense Hermitian spectral calculus: decompositions, operator functions,
// pinching, trace norms and semidefinite-order checks.

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <variant>

#include <Eigen/Dense>

namespace resolvon {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermiticityTol = 1e-12;
inline constexpr double kDefaultRankTol = 1e-10;
inline constexpr double kProjectorTol = 1e-10;

/// Dense complex square matrix, Hermitian by construction.
///
/// The constructor replaces its input A by (A + A^dagger)/2, so tiny
/// floating-point drift never makes an operator fall out of the class.
/// Sums, differences and real scalings of Hermitian operators are exactly
/// Hermitian in IEEE arithmetic and skip the symmetrization.
class HermitianOperator {
 public:
  explicit HermitianOperator(const ComplexMatrix& entries);

  static HermitianOperator zero(std::size_t dim);
  static HermitianOperator identity(std::size_t dim);
  static HermitianOperator diagonal(std::span<const double> values);
  static HermitianOperator diagonal(std::initializer_list<double> values);
  /// |v><v| (v is not normalized).
  static HermitianOperator outer(const ComplexVector& v);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  const ComplexMatrix& matrix() const noexcept { return m_; }
  Complex operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  double trace() const noexcept { return m_.diagonal().real().sum(); }

  /// u * A * u^dagger.
  HermitianOperator conjugate_by(const ComplexMatrix& u) const;
  /// basis^dagger * A * basis, i.e. A expressed on the span of basis's columns.
  HermitianOperator compress(const ComplexMatrix& basis) const;
  /// basis * A * basis^dagger, the inverse of compress for orthonormal bases.
  HermitianOperator expand(const ComplexMatrix& basis) const;

  double max_abs_diff(const HermitianOperator& other) const;

  HermitianOperator& operator+=(const HermitianOperator& rhs);
  HermitianOperator& operator-=(const HermitianOperator& rhs);
  HermitianOperator& operator*=(double s);

  friend HermitianOperator operator+(HermitianOperator a, const HermitianOperator& b) {
    return a += b;
  }
  friend HermitianOperator operator-(HermitianOperator a, const HermitianOperator& b) {
    return a -= b;
  }
  friend HermitianOperator operator*(HermitianOperator a, double s) { return a *= s; }
  friend HermitianOperator operator*(double s, HermitianOperator a) { return a *= s; }

 private:
  struct Trusted {};
  HermitianOperator(ComplexMatrix entries, Trusted) : m_(std::move(entries)) {}

  ComplexMatrix m_;
};

/// Tr(A B) for Hermitian A, B; real up to rounding.
double trace_of_product(const HermitianOperator& a, const HermitianOperator& b);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b);

struct SpectralDecomposition {
  RealVector eigenvalues;      // descending
  ComplexMatrix eigenvectors;  // unitary; column k pairs with eigenvalues[k]

  double max_eigenvalue() const { return eigenvalues(0); }
  double min_eigenvalue() const { return eigenvalues(eigenvalues.size() - 1); }
  ComplexMatrix reconstruct() const;
};

SpectralDecomposition spectral_decompose(const HermitianOperator& a);
/// Eigenvalues only, descending. Cheaper than a full decomposition.
RealVector eigenvalues_of(const HermitianOperator& a);
double min_eigenvalue(const HermitianOperator& a);
double max_eigenvalue(const HermitianOperator& a);

namespace spectral {
/// lambda -> exp(c * lambda)
struct ExpScaled {
  double c;
};
/// lambda -> lambda^{-1/2} on lambda > rank_tol * lambda_max, else 0
struct GenInvSqrt {};
/// lambda -> 1 on lambda > rank_tol * lambda_max, else 0
struct Support {};
/// lambda -> f(lambda) for a caller-supplied scalar function
struct Table {
  std::function<double(double)> f;
};
}  // namespace spectral

using SpectralFunction =
    std::variant<spectral::ExpScaled, spectral::GenInvSqrt, spectral::Support, spectral::Table>;

HermitianOperator apply_spectral_function(const HermitianOperator& a, const SpectralFunction& f,
                                          double rank_tol = kDefaultRankTol);
HermitianOperator apply_spectral_function(const SpectralDecomposition& decomposition,
                                          const SpectralFunction& f,
                                          double rank_tol = kDefaultRankTol);

/// Orthogonal projector, stored both as an operator and as an orthonormal
/// basis of its range.
class Projector {
 public:
  /// Validates idempotence (max-entry ||P^2 - P|| <= 1e-10) and integral trace.
  explicit Projector(const HermitianOperator& op);

  /// Projector onto the span of orthonormal columns. Throws if the columns
  /// are not orthonormal within 1e-10.
  static Projector onto(ComplexMatrix orthonormal_columns);
  static Projector zero(std::size_t dim);
  static Projector identity(std::size_t dim);

  const HermitianOperator& op() const noexcept { return op_; }
  const ComplexMatrix& basis() const noexcept { return basis_; }
  std::size_t rank() const noexcept { return static_cast<std::size_t>(basis_.cols()); }
  std::size_t dim() const noexcept { return op_.dim(); }

 private:
  Projector(HermitianOperator op, ComplexMatrix basis)
      : op_(std::move(op)), basis_(std::move(basis)) {}

  HermitianOperator op_;
  ComplexMatrix basis_;
};

/// Projector onto the eigenvectors of a with eigenvalue > rank_tol * lambda_max.
Projector support_projector(const HermitianOperator& a, double rank_tol = kDefaultRankTol);

/// The pinching map A -> P A P.
HermitianOperator pinch(const HermitianOperator& a, const Projector& p);

/// ||A||_1 = sum |lambda_i|.
double trace_norm(const HermitianOperator& a);
/// (1/2) ||A - B||_1.
double trace_distance(const HermitianOperator& a, const HermitianOperator& b);
/// Sum of the positive eigenvalues.
double positive_part_trace(const HermitianOperator& a);
/// A <= B in the semidefinite order: lambda_min(B - A) >= -tol.
bool psd_leq(const HermitianOperator& a, const HermitianOperator& b, double tol);

struct Interval {
  double lo;
  double hi;
  bool contains(double x) const { return x >= lo && x <= hi; }
};

/// Transfers a scalar inequality f >= g on `domain` to the operator inequality
/// g(A) <= f(A). Throws InputError when a sampled grid point has f < g or an
/// eigenvalue of A lies outside the domain.
bool scalar_dominance_transfer_check(const std::function<double(double)>& f,
                                     const std::function<double(double)>& g,
                                     const HermitianOperator& a, Interval domain);

}  // namespace resolvon
