#pragma once

// Random operator generators used by the verification suites and tests.

#include <cstddef>
#include <random>

#include "resolvon/hermitian.hpp"

namespace resolvon {

using Rng = std::mt19937_64;

/// Haar-random unitary (QR of a complex Ginibre matrix with phase fix).
ComplexMatrix random_unitary(std::size_t dim, Rng& rng);
/// Hermitian with i.i.d. Gaussian entries scaled by `scale`.
HermitianOperator random_hermitian(std::size_t dim, Rng& rng, double scale = 1.0);
/// Density operator of the given rank (rank 0 means full rank).
HermitianOperator random_density(std::size_t dim, Rng& rng, std::size_t rank = 0);
/// Operator with spectrum drawn uniformly from [0, 1] in a Haar-random basis.
HermitianOperator random_unit_interval_operator(std::size_t dim, Rng& rng);
/// Unit vector drawn from the uniform measure on the complex sphere.
ComplexVector random_unit_vector(std::size_t dim, Rng& rng);

}  // namespace resolvon
