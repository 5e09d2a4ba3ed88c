#include "resolvon/mmwu.hpp"

#include <cmath>
#include <sstream>

#include "resolvon/error.hpp"

namespace resolvon {

CostMatrix::CostMatrix(HermitianOperator m) : m_(std::move(m)) {
  const RealVector ev = eigenvalues_of(m_);
  const double top = ev(0);
  const double bottom = ev(ev.size() - 1);
  if (bottom < -kCostTol || top > 1.0 + kCostTol) {
    std::ostringstream os;
    os << "cost matrix violates 0 <= M <= I: eigenvalue " << (bottom < -kCostTol ? bottom : top);
    throw InputError(os.str());
  }
}

namespace {

std::size_t checked_dim(double epsilon, std::size_t dim) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) {
    std::ostringstream os;
    os << "epsilon must lie in the open interval (0, 1/2), got " << epsilon;
    throw InputError(os.str());
  }
  if (dim == 0) throw InputError("MMWU dimension must be >= 1");
  return dim;
}

}  // namespace

MmwuState::MmwuState(double epsilon, std::size_t dim)
    : epsilon_(epsilon),
      cost_sum_(HermitianOperator::zero(checked_dim(epsilon, dim))),
      density_(HermitianOperator::identity(dim) * (1.0 / static_cast<double>(dim))) {}

double MmwuState::step(const CostMatrix& cost) {
  if (cost.dim() != dim()) throw InputError("MMWU step: cost dimension mismatch");
  const double paid = trace_of_product(density_, cost.op());
  incurred_.push_back(paid);
  total_incurred_ += paid;
  cost_sum_ += cost.op();
  refresh_density();
  return paid;
}

void MmwuState::refresh_density() {
  const SpectralDecomposition d = spectral_decompose(cost_sum_);
  cost_sum_min_eigenvalue_ = d.min_eigenvalue();
  // exp(-eps * (lambda - lambda_min)) keeps the largest weight at 1; the
  // shift cancels in the normalization.
  RealVector w = (-epsilon_ * (d.eigenvalues.array() - cost_sum_min_eigenvalue_)).exp();
  w /= w.sum();
  density_ = HermitianOperator(d.eigenvectors * w.asDiagonal() * d.eigenvectors.adjoint());
}

double MmwuState::regret_gap() const {
  if (round() == 0) throw InputError("regret_gap requires at least one completed round");
  return cost_sum_min_eigenvalue_ + std::log(static_cast<double>(dim())) / epsilon_ -
         (1.0 - epsilon_) * total_incurred_;
}

}  // namespace resolvon
