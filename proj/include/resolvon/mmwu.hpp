#pragma once

// Hedge-style matrix multiplicative weights.
//
// The weight matrix G(l) = exp(-epsilon * sum_{l' < l} M(l')) is never stored;
// each round rebuilds the density F(l) = G(l) / Tr G(l) from the running cost
// sum with a single eigendecomposition, so the error in F does not grow with
// the number of rounds.

#include <cstddef>
#include <vector>

#include "resolvon/hermitian.hpp"

namespace resolvon {

inline constexpr double kCostTol = 1e-9;

/// A cost matrix with 0 <= M <= I (checked with kCostTol slack).
class CostMatrix {
 public:
  explicit CostMatrix(HermitianOperator m);

  const HermitianOperator& op() const noexcept { return m_; }
  std::size_t dim() const noexcept { return m_.dim(); }

 private:
  HermitianOperator m_;
};

class MmwuState {
 public:
  /// Requires 0 < epsilon < 1/2 and dim >= 1.
  MmwuState(double epsilon, std::size_t dim);

  double epsilon() const noexcept { return epsilon_; }
  std::size_t dim() const noexcept { return cost_sum_.dim(); }
  /// Number of completed rounds.
  std::size_t round() const noexcept { return incurred_.size(); }
  const HermitianOperator& cost_sum() const noexcept { return cost_sum_; }
  /// Tr(F(l) M(l)) for every completed round, at full precision.
  const std::vector<double>& incurred() const noexcept { return incurred_; }
  double total_incurred() const noexcept { return total_incurred_; }

  /// The density the next round plays.
  const HermitianOperator& density() const noexcept { return density_; }

  /// Pays Tr(density() * cost), accumulates the cost, and refreshes the
  /// density. Returns the incurred cost.
  double step(const CostMatrix& cost);
  /// Same, validating 0 <= cost <= I first.
  double step(const HermitianOperator& cost) { return step(CostMatrix(cost)); }

  /// lambda_min(cost_sum) + ln(dim)/epsilon - (1 - epsilon) * sum incurred.
  /// Non-negative up to rounding for every cost sequence obeying the contract.
  double regret_gap() const;

 private:
  void refresh_density();

  double epsilon_;
  HermitianOperator cost_sum_;
  HermitianOperator density_;
  std::vector<double> incurred_;
  double total_incurred_ = 0.0;
  double cost_sum_min_eigenvalue_ = 0.0;
};

}  // namespace resolvon
