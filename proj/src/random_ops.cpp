#include "resolvon/random_ops.hpp"

#include <cmath>

namespace resolvon {

namespace {

ComplexMatrix ginibre(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  }
  return g;
}

}  // namespace

ComplexMatrix random_unitary(std::size_t dim, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(dim);
  Eigen::HouseholderQR<ComplexMatrix> qr(ginibre(n, n, rng));
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

HermitianOperator random_hermitian(std::size_t dim, Rng& rng, double scale) {
  const auto n = static_cast<Eigen::Index>(dim);
  return HermitianOperator(ginibre(n, n, rng) * scale);
}

HermitianOperator random_density(std::size_t dim, Rng& rng, std::size_t rank) {
  const auto n = static_cast<Eigen::Index>(dim);
  const auto k = static_cast<Eigen::Index>(rank == 0 ? dim : rank);
  const ComplexMatrix g = ginibre(n, k, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return HermitianOperator(rho);
}

HermitianOperator random_unit_interval_operator(std::size_t dim, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  RealVector spectrum(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < spectrum.size(); ++i) spectrum(i) = unit(rng);
  const ComplexMatrix u = random_unitary(dim, rng);
  return HermitianOperator(u * spectrum.asDiagonal() * u.adjoint());
}

ComplexVector random_unit_vector(std::size_t dim, Rng& rng) {
  ComplexVector v = ginibre(static_cast<Eigen::Index>(dim), 1, rng).col(0);
  return v / v.norm();
}

}  // namespace resolvon
