#pragma once

#include <cmath>
#include <initializer_list>
#include <random>
#include <vector>

#include "resolvon/channel.hpp"
#include "resolvon/hermitian.hpp"
#include "resolvon/random_ops.hpp"

namespace support {

using resolvon::Complex;
using resolvon::ComplexMatrix;
using resolvon::ComplexVector;
using resolvon::HermitianOperator;

inline HermitianOperator pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return HermitianOperator(m);
}

inline HermitianOperator pure(std::initializer_list<Complex> amplitudes) {
  ComplexVector v(static_cast<Eigen::Index>(amplitudes.size()));
  Eigen::Index i = 0;
  for (Complex a : amplitudes) v(i++) = a;
  v.normalize();
  return HermitianOperator::outer(v);
}

inline double max_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

inline double max_diff(const HermitianOperator& a, const HermitianOperator& b) {
  return max_diff(a.matrix(), b.matrix());
}

/// W_0 = |0><0|, W_1 = |+><+|.
inline resolvon::CQChannel zero_plus_channel() {
  return resolvon::CQChannel({"0", "+"}, {pure({1.0, 0.0}), pure({1.0, 1.0})});
}

/// Diagonal embedding of a classical channel with the given rows.
inline resolvon::CQChannel classical_channel(const std::vector<std::vector<double>>& rows) {
  std::vector<HermitianOperator> states;
  for (const auto& r : rows) states.push_back(HermitianOperator::diagonal(std::span<const double>(r)));
  return resolvon::CQChannel({}, std::move(states));
}

inline resolvon::CQChannel bsc(double flip) { return classical_channel({{1 - flip, flip}, {flip, 1 - flip}}); }

inline std::vector<double> random_probabilities(std::size_t k, resolvon::Rng& rng) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> p(k);
  double sum = 0.0;
  for (double& q : p) sum += (q = e(rng) + 1e-3);
  for (double& q : p) q /= sum;
  double rest = 1.0;
  for (std::size_t i = 0; i + 1 < k; ++i) rest -= p[i];
  p.back() = rest;
  return p;
}

}  // namespace support
