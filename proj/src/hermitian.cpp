#include "resolvon/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "resolvon/error.hpp"

namespace resolvon {

namespace {

void require_same_dim(const HermitianOperator& a, const HermitianOperator& b, const char* what) {
  if (a.dim() != b.dim()) {
    std::ostringstream os;
    os << what << ": dimension mismatch (" << a.dim() << " vs " << b.dim() << ")";
    throw InputError(os.str());
  }
}

ComplexMatrix symmetrized(const ComplexMatrix& m) {
  return (m + m.adjoint()) * 0.5;
}

[[noreturn]] void eigensolver_failed(const HermitianOperator& a) {
  const double rcond = Eigen::PartialPivLU<ComplexMatrix>(a.matrix()).rcond();
  std::ostringstream os;
  os << "eigensolver did not converge (dim " << a.dim() << ", condition estimate "
     << (rcond > 0 ? 1.0 / rcond : INFINITY) << ")";
  throw NumericalError(os.str());
}

double scalar_value(const SpectralFunction& f, double lambda, double cutoff) {
  return std::visit(
      [&](const auto& fn) -> double {
        using T = std::decay_t<decltype(fn)>;
        if constexpr (std::is_same_v<T, spectral::ExpScaled>) {
          return std::exp(fn.c * lambda);
        } else if constexpr (std::is_same_v<T, spectral::GenInvSqrt>) {
          return lambda > cutoff ? 1.0 / std::sqrt(lambda) : 0.0;
        } else if constexpr (std::is_same_v<T, spectral::Support>) {
          return lambda > cutoff ? 1.0 : 0.0;
        } else {
          return fn.f(lambda);
        }
      },
      f);
}

}  // namespace

HermitianOperator::HermitianOperator(const ComplexMatrix& entries) {
  if (entries.rows() == 0 || entries.rows() != entries.cols()) {
    throw InputError("HermitianOperator requires a non-empty square matrix");
  }
  if (!entries.allFinite()) {
    throw InputError("HermitianOperator entries must be finite");
  }
  m_ = symmetrized(entries);
}

HermitianOperator HermitianOperator::zero(std::size_t dim) {
  if (dim == 0) throw InputError("operator dimension must be >= 1");
  const auto n = static_cast<Eigen::Index>(dim);
  return {ComplexMatrix::Zero(n, n), Trusted{}};
}

HermitianOperator HermitianOperator::identity(std::size_t dim) {
  if (dim == 0) throw InputError("operator dimension must be >= 1");
  const auto n = static_cast<Eigen::Index>(dim);
  return {ComplexMatrix::Identity(n, n), Trusted{}};
}

HermitianOperator HermitianOperator::diagonal(std::span<const double> values) {
  if (values.empty()) throw InputError("operator dimension must be >= 1");
  const auto n = static_cast<Eigen::Index>(values.size());
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = values[static_cast<std::size_t>(i)];
  return HermitianOperator(m);
}

HermitianOperator HermitianOperator::diagonal(std::initializer_list<double> values) {
  return diagonal(std::span<const double>(values.begin(), values.size()));
}

HermitianOperator HermitianOperator::outer(const ComplexVector& v) {
  return HermitianOperator(v * v.adjoint());
}

HermitianOperator HermitianOperator::conjugate_by(const ComplexMatrix& u) const {
  if (u.cols() != m_.rows()) throw InputError("conjugate_by: dimension mismatch");
  return HermitianOperator(u * m_ * u.adjoint());
}

HermitianOperator HermitianOperator::compress(const ComplexMatrix& basis) const {
  if (basis.rows() != m_.rows()) throw InputError("compress: dimension mismatch");
  if (basis.cols() == 0) throw InputError("compress: empty basis");
  return HermitianOperator(basis.adjoint() * m_ * basis);
}

HermitianOperator HermitianOperator::expand(const ComplexMatrix& basis) const {
  if (basis.cols() != m_.rows()) throw InputError("expand: dimension mismatch");
  return HermitianOperator(basis * m_ * basis.adjoint());
}

double HermitianOperator::max_abs_diff(const HermitianOperator& other) const {
  require_same_dim(*this, other, "max_abs_diff");
  return (m_ - other.m_).cwiseAbs().maxCoeff();
}

HermitianOperator& HermitianOperator::operator+=(const HermitianOperator& rhs) {
  require_same_dim(*this, rhs, "operator+");
  m_ += rhs.m_;
  return *this;
}

HermitianOperator& HermitianOperator::operator-=(const HermitianOperator& rhs) {
  require_same_dim(*this, rhs, "operator-");
  m_ -= rhs.m_;
  return *this;
}

HermitianOperator& HermitianOperator::operator*=(double s) {
  m_ *= s;
  return *this;
}

double trace_of_product(const HermitianOperator& a, const HermitianOperator& b) {
  require_same_dim(a, b, "trace_of_product");
  // Tr(AB) = sum_ij A_ij B_ji = sum_ij A_ij conj(B_ij) for Hermitian B.
  return (a.matrix().array() * b.matrix().array().conjugate()).real().sum();
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b) {
  return HermitianOperator(kron(a.matrix(), b.matrix()));
}

ComplexMatrix SpectralDecomposition::reconstruct() const {
  return eigenvectors * eigenvalues.asDiagonal() * eigenvectors.adjoint();
}

SpectralDecomposition spectral_decompose(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.matrix());
  if (solver.info() != Eigen::Success) eigensolver_failed(a);
  // Eigen returns ascending order.
  SpectralDecomposition out;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

RealVector eigenvalues_of(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) eigensolver_failed(a);
  return solver.eigenvalues().reverse();
}

double min_eigenvalue(const HermitianOperator& a) {
  const RealVector ev = eigenvalues_of(a);
  return ev(ev.size() - 1);
}

double max_eigenvalue(const HermitianOperator& a) { return eigenvalues_of(a)(0); }

HermitianOperator apply_spectral_function(const SpectralDecomposition& d,
                                          const SpectralFunction& f, double rank_tol) {
  const double cutoff = rank_tol * std::max(d.max_eigenvalue(), 0.0);
  RealVector values(d.eigenvalues.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    values(i) = scalar_value(f, d.eigenvalues(i), cutoff);
  }
  return HermitianOperator(d.eigenvectors * values.asDiagonal() * d.eigenvectors.adjoint());
}

HermitianOperator apply_spectral_function(const HermitianOperator& a, const SpectralFunction& f,
                                          double rank_tol) {
  return apply_spectral_function(spectral_decompose(a), f, rank_tol);
}

Projector::Projector(const HermitianOperator& op) : op_(op), basis_() {
  const ComplexMatrix& p = op.matrix();
  const double idempotence = (p * p - p).cwiseAbs().maxCoeff();
  if (idempotence > kProjectorTol) {
    std::ostringstream os;
    os << "operator is not a projector: max |P^2 - P| = " << idempotence;
    throw InputError(os.str());
  }
  const double tr = op.trace();
  if (std::abs(tr - std::round(tr)) > 1e-8) {
    throw InputError("projector trace is not integral");
  }
  const SpectralDecomposition d = spectral_decompose(op);
  Eigen::Index rank = 0;
  while (rank < d.eigenvalues.size() && d.eigenvalues(rank) > 0.5) ++rank;
  basis_ = d.eigenvectors.leftCols(rank);
}

Projector Projector::onto(ComplexMatrix columns) {
  if (columns.rows() == 0) throw InputError("projector dimension must be >= 1");
  const auto r = columns.cols();
  if (r > 0) {
    const double err =
        (columns.adjoint() * columns - ComplexMatrix::Identity(r, r)).cwiseAbs().maxCoeff();
    if (err > kProjectorTol) {
      std::ostringstream os;
      os << "projector basis is not orthonormal (max deviation " << err << ")";
      throw InputError(os.str());
    }
  }
  HermitianOperator op = r > 0 ? HermitianOperator(columns * columns.adjoint())
                               : HermitianOperator::zero(static_cast<std::size_t>(columns.rows()));
  return Projector(std::move(op), std::move(columns));
}

Projector Projector::zero(std::size_t dim) {
  return onto(ComplexMatrix(static_cast<Eigen::Index>(dim), 0));
}

Projector Projector::identity(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return onto(ComplexMatrix::Identity(n, n));
}

Projector support_projector(const HermitianOperator& a, double rank_tol) {
  const SpectralDecomposition d = spectral_decompose(a);
  const double cutoff = rank_tol * std::max(d.max_eigenvalue(), 0.0);
  Eigen::Index rank = 0;
  while (rank < d.eigenvalues.size() && d.eigenvalues(rank) > cutoff) ++rank;
  return Projector::onto(d.eigenvectors.leftCols(rank));
}

HermitianOperator pinch(const HermitianOperator& a, const Projector& p) {
  require_same_dim(a, p.op(), "pinch");
  const ComplexMatrix& pm = p.op().matrix();
  return HermitianOperator(pm * a.matrix() * pm);
}

double trace_norm(const HermitianOperator& a) { return eigenvalues_of(a).cwiseAbs().sum(); }

double trace_distance(const HermitianOperator& a, const HermitianOperator& b) {
  require_same_dim(a, b, "trace_distance");
  return 0.5 * trace_norm(a - b);
}

double positive_part_trace(const HermitianOperator& a) {
  return eigenvalues_of(a).cwiseMax(0.0).sum();
}

bool psd_leq(const HermitianOperator& a, const HermitianOperator& b, double tol) {
  require_same_dim(a, b, "psd_leq");
  if (tol < 0) throw InputError("psd_leq: tolerance must be non-negative");
  return min_eigenvalue(b - a) >= -tol;
}

bool scalar_dominance_transfer_check(const std::function<double(double)>& f,
                                     const std::function<double(double)>& g,
                                     const HermitianOperator& a, Interval domain) {
  if (!(domain.lo <= domain.hi)) throw InputError("empty domain interval");
  constexpr int kGrid = 1000;
  for (int i = 0; i < kGrid; ++i) {
    const double x =
        domain.lo + (domain.hi - domain.lo) * static_cast<double>(i) / (kGrid - 1);
    if (f(x) < g(x)) {
      std::ostringstream os;
      os << "scalar dominance fails on the domain grid: f(" << x << ") < g(" << x << ")";
      throw InputError(os.str());
    }
  }
  const SpectralDecomposition d = spectral_decompose(a);
  const double slack = kHermiticityTol * std::max(1.0, d.eigenvalues.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < d.eigenvalues.size(); ++i) {
    const double lambda = d.eigenvalues(i);
    if (lambda < domain.lo - slack || lambda > domain.hi + slack) {
      std::ostringstream os;
      os << "eigenvalue " << lambda << " lies outside the domain [" << domain.lo << ", "
         << domain.hi << "]";
      throw InputError(os.str());
    }
  }
  const HermitianOperator fa = apply_spectral_function(d, spectral::Table{f});
  const HermitianOperator ga = apply_spectral_function(d, spectral::Table{g});
  return psd_leq(ga, fa, 1e-9);
}

}  // namespace resolvon
