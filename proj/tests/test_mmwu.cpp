#include <doctest.h>

#include <cmath>

#include "resolvon/error.hpp"
#include "resolvon/mmwu.hpp"
#include "resolvon/random_ops.hpp"
#include "test_support.hpp"

using namespace resolvon;
using support::max_diff;

TEST_CASE("new state") {
  const MmwuState s(0.1, 4);
  CHECK(s.round() == 0);
  CHECK(max_diff(s.density(), HermitianOperator::identity(4) * 0.25) <= 1e-15);
  CHECK(max_diff(MmwuState(0.25, 1).density(), HermitianOperator::identity(1)) == 0.0);
  CHECK_THROWS_AS(MmwuState(0.5, 2), InputError);
  CHECK_THROWS_AS(MmwuState(0.0, 2), InputError);
  CHECK_THROWS_AS(MmwuState(0.1, 0), InputError);
}

TEST_CASE("density follows the cost sum") {
  const double eps = 0.3;
  MmwuState s(eps, 2);
  s.step(HermitianOperator::diagonal({1.0, 0.0}));
  const double z = std::exp(-eps) + 1.0;
  CHECK(max_diff(s.density(), HermitianOperator::diagonal({std::exp(-eps) / z, 1.0 / z})) <= 1e-15);

  MmwuState flat(eps, 3);
  for (int i = 0; i < 5; ++i) flat.step(HermitianOperator::identity(3) * 0.7);
  CHECK(max_diff(flat.density(), HermitianOperator::identity(3) * (1.0 / 3.0)) <= 1e-15);
}

TEST_CASE("step pays before accumulating") {
  MmwuState s(0.2, 2);
  CHECK(s.step(HermitianOperator::identity(2) * 0.5) == doctest::Approx(0.5));
  const HermitianOperator before = s.density();
  CHECK(s.step(HermitianOperator::zero(2)) == 0.0);
  CHECK(max_diff(s.density(), before) <= 1e-15);

  MmwuState t(0.2, 2);
  t.step(HermitianOperator::diagonal({1.0, 0.0}));
  t.step(HermitianOperator::diagonal({1.0, 0.0}));
  const double expected = std::exp(-0.2) / (std::exp(-0.2) + 1.0);
  CHECK(t.incurred()[1] == doctest::Approx(expected).epsilon(1e-14));
  CHECK(t.incurred()[1] == doctest::Approx(0.4501660026875221).epsilon(1e-12));
  CHECK(t.round() == 2);
}

TEST_CASE("cost contract is enforced") {
  MmwuState s(0.1, 2);
  CHECK_THROWS_AS(s.step(HermitianOperator::diagonal({1.1, 0.0})), InputError);
  CHECK_THROWS_AS(s.step(HermitianOperator::diagonal({0.5, -0.01})), InputError);
  CHECK_THROWS_AS(s.step(HermitianOperator::identity(3) * 0.5), InputError);
  CHECK(s.round() == 0);
}

TEST_CASE("regret gap examples") {
  for (double eps : {0.05, 0.1, 0.3}) {
    MmwuState s(eps, 2);
    s.step(HermitianOperator::identity(2) * 0.5);
    CHECK(s.regret_gap() == doctest::Approx(0.5 + std::log(2.0) / eps - (1.0 - eps) * 0.5).epsilon(1e-14));
  }
  MmwuState zero(0.1, 3);
  CHECK_THROWS_AS(zero.regret_gap(), InputError);
  for (int i = 0; i < 7; ++i) zero.step(HermitianOperator::zero(3));
  CHECK(zero.regret_gap() == doctest::Approx(std::log(3.0) / 0.1));

  MmwuState alt(0.1, 2);
  for (int l = 0; l < 100; ++l) {
    alt.step(l % 2 == 0 ? HermitianOperator::diagonal({1.0, 0.0}) : HermitianOperator::diagonal({0.0, 1.0}));
  }
  CHECK(alt.regret_gap() >= 0.0);
}

TEST_CASE("regret bound holds for every unit vector") {
  Rng rng(101);
  const double eps_grid[] = {0.05, 0.1, 0.2, 0.3, 0.45};
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t d = 1 + trial % 8;
    MmwuState s(eps_grid[trial % 5], d);
    const std::size_t rounds = 1 + (trial * 37) % 100;
    for (std::size_t l = 0; l < rounds; ++l) s.step(random_unit_interval_operator(d, rng));
    const double lhs = (1.0 - s.epsilon()) * s.total_incurred();
    const SpectralDecomposition dec = spectral_decompose(s.cost_sum());
    const ComplexVector binding = dec.eigenvectors.col(dec.eigenvectors.cols() - 1);
    const double at_binding = (binding.adjoint() * s.cost_sum().matrix() * binding)(0, 0).real();
    CHECK(lhs <= at_binding + std::log(static_cast<double>(d)) / s.epsilon() + 1e-8);
    const ComplexVector psi = random_unit_vector(d, rng);
    CHECK(lhs <= (psi.adjoint() * s.cost_sum().matrix() * psi)(0, 0).real() +
                     std::log(static_cast<double>(d)) / s.epsilon() + 1e-8);
    CHECK(s.regret_gap() >= -1e-8);
  }
}

TEST_CASE("density stays a state and the run is deterministic") {
  Rng rng(103);
  std::vector<HermitianOperator> costs;
  for (int i = 0; i < 200; ++i) costs.push_back(random_unit_interval_operator(5, rng));
  MmwuState a(0.45, 5), b(0.45, 5);
  for (const auto& m : costs) {
    a.step(m);
    b.step(m);
    CHECK(std::abs(a.density().trace() - 1.0) <= 1e-10);
    CHECK(min_eigenvalue(a.density()) >= -1e-12);
    CHECK(min_eigenvalue(a.cost_sum()) >= -1e-9);
  }
  CHECK(a.incurred() == b.incurred());
  CHECK(a.density().matrix() == b.density().matrix());
}
