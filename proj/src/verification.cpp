#include "resolvon/verification.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "resolvon/error.hpp"
#include "resolvon/mmwu.hpp"
#include "resolvon/random_ops.hpp"
#include "resolvon/resolver.hpp"
#include "resolvon/soft_cover.hpp"
#include "resolvon/typicality.hpp"

namespace resolvon {

namespace {

constexpr std::size_t kMaxReportedFailures = 8;

class Recorder {
 public:
  explicit Recorder(std::string name) { result_.name = std::move(name); }

  void check(bool ok, const std::string& what) {
    ++result_.checks;
    if (!ok && result_.failures.size() < kMaxReportedFailures) result_.failures.push_back(what);
  }
  void check_leq(double lhs, double rhs, const std::string& what) {
    std::ostringstream os;
    os.precision(17);
    os << what << ": " << lhs << " > " << rhs;
    check(lhs <= rhs, os.str());
  }

  SuiteResult take() { return std::move(result_); }

 private:
  SuiteResult result_;
};

std::vector<double> random_probabilities(std::size_t k, Rng& rng) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> p(k);
  double sum = 0.0;
  for (double& q : p) sum += (q = e(rng) + 1e-3);
  for (double& q : p) q /= sum;
  // Absorb rounding so the weights pass the 1e-12 sum check.
  double rest = 1.0;
  for (std::size_t i = 0; i + 1 < k; ++i) rest -= p[i];
  p.back() = rest;
  return p;
}

SuiteResult regret_suite(Rng& rng) {
  Recorder r("mmwu_regret");
  const double eps_grid[] = {0.05, 0.1, 0.2, 0.3, 0.45};
  std::uniform_int_distribution<std::size_t> dim_pick(1, 6), len_pick(1, 60);
  for (int trial = 0; trial < 50; ++trial) {
    const double eps = eps_grid[trial % 5];
    MmwuState engine(eps, dim_pick(rng));
    const std::size_t rounds = len_pick(rng);
    for (std::size_t l = 0; l < rounds; ++l) engine.step(random_unit_interval_operator(engine.dim(), rng));
    r.check_leq(-engine.regret_gap(), 1e-8, "regret gap, trial " + std::to_string(trial));
  }
  return r.take();
}

SuiteResult exponential_suite(Rng& rng) {
  Recorder r("exponential_bounds");
  std::uniform_int_distribution<std::size_t> dim_pick(1, 6);
  std::uniform_real_distribution<double> eps_pick(0.01, 0.49);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t d = dim_pick(rng);
    const HermitianOperator a = random_unit_interval_operator(d, rng);
    const double eps = eps_pick(rng);
    const HermitianOperator lhs = apply_spectral_function(a, spectral::ExpScaled{-eps});
    const HermitianOperator rhs = HermitianOperator::identity(d) - (1.0 - std::exp(-eps)) * a;
    r.check(psd_leq(lhs, rhs, 1e-9), "exp(-eps A) <= I - (1 - e^-eps) A, trial " + std::to_string(trial));
  }
  for (int i = 1; i < 1000; ++i) {
    const double eps = 0.5 * i / 1000.0;
    r.check_leq(eps * (1.0 - eps), 1.0 - std::exp(-eps), "1 - e^-eps >= eps (1 - eps)");
  }
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t d = dim_pick(rng);
    const HermitianOperator a = random_hermitian(d, rng), b = random_hermitian(d, rng);
    const double lhs = apply_spectral_function(a + b, spectral::ExpScaled{1.0}).trace();
    const ComplexMatrix ea = apply_spectral_function(a, spectral::ExpScaled{1.0}).matrix();
    const ComplexMatrix eb = apply_spectral_function(b, spectral::ExpScaled{1.0}).matrix();
    r.check_leq(lhs, (ea * eb).trace().real() + 1e-9, "Golden-Thompson, trial " + std::to_string(trial));
  }
  return r.take();
}

SuiteResult soft_cover_suite(Rng& rng) {
  Recorder r("soft_cover");
  std::uniform_int_distribution<std::size_t> dim_pick(2, 4), edge_pick(1, 4);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t d = dim_pick(rng), k = edge_pick(rng);
    std::vector<HermitianOperator> edges;
    for (std::size_t x = 0; x < k; ++x) edges.push_back(random_density(d, rng));
    const Hypergraph h(std::move(edges), random_probabilities(k, rng));
    SoftCoverParams params{0.2, 0.05, 0.05, h.max_edge_eigenvalue()};
    CoverRun run(h, params);
    const std::size_t rounds =
        static_cast<std::size_t>(required_size(params, d, Lemma3Size{run.costs().d_max}).rounds);
    run.advance(rounds);
    const CoverCertificate c = run.certificate();
    const std::string tag = ", trial " + std::to_string(trial);
    r.check(c.lemma3_holds.value_or(false), "lemma 3 operator bound" + tag);
    r.check_leq(-c.lemma2_min_margin.value_or(-1.0), 1e-9, "per-round margin" + tag);
    r.check(c.lemma4_holds.value_or(true), "d_max bound" + tag);
    r.check(c.certified(), "certificate" + tag);
  }
  return r.take();
}

SuiteResult channel_suite(const CQChannel& ch) {
  Recorder r("channel");
  const double ln_d = std::log(static_cast<double>(ch.output_dim()));
  const double ln_k = std::log(static_cast<double>(ch.alphabet_size()));
  for (Symbol x = 0; x < ch.alphabet_size(); ++x) {
    const double h = von_neumann_entropy(ch.state(x));
    r.check(h >= -1e-12 && h <= ln_d + 1e-10, "entropy range for symbol " + ch.labels()[x]);
  }
  const std::vector<double> uniform(ch.alphabet_size(), 1.0 / static_cast<double>(ch.alphabet_size()));
  const HermitianOperator mix = output_mix(ch, uniform);
  r.check(std::abs(mix.trace() - 1.0) <= 1e-9 && min_eigenvalue(mix) >= -1e-9, "uniform output mix is a density");
  const double info = holevo_information(ch, uniform);
  r.check(info >= -1e-10, "Holevo information non-negative");
  r.check_leq(info, std::min(ln_d, ln_k) + 1e-10, "Holevo information ceiling");
  return r.take();
}

SuiteResult typicality_suite(const CQChannel& ch) {
  Recorder r("typicality");
  const std::size_t d = ch.output_dim(), k = ch.alphabet_size();
  std::size_t max_n = 0;
  for (std::size_t n = 1, amb = d, seqs = k; n <= 4 && amb <= 256 && seqs <= 256; ++n, amb *= d, seqs *= k) {
    max_n = n;
  }
  for (std::size_t n = 1; n <= max_n; ++n) {
    for (double alpha : {1.0, 2.0, 4.0}) {
      const TypicalitySpec spec{alpha, n};
      const std::string tag = " (n=" + std::to_string(n) + ", alpha=" + std::to_string(static_cast<int>(alpha)) + ")";
      for (Symbol x = 0; x < k; ++x) {
        const ProductSubspace s = typical_subspace(ch.state(x), spec);
        r.check_leq(static_cast<double>(s.rank()),
                    typical_rank_bound(von_neumann_entropy(ch.state(x)), d, alpha, n) * (1.0 + 1e-6),
                    "typical rank" + tag);
      }
      std::vector<std::size_t> digits(n, 0);
      while (true) {
        const Sequence xn(digits.begin(), digits.end());
        const TypeClass t = type_of(xn, k);
        const ProductSubspace cond = conditional_typical_subspace(ch, xn, spec);
        std::vector<const HermitianOperator*> local;
        for (Symbol x : xn) local.push_back(&ch.state(x));
        const double floor = conditional_mass_floor(d, k, alpha);
        r.check_leq(floor - 1e-9, cond.trace_against(local), "conditional mass" + tag);
        double top = 0.0;
        for (std::size_t j = 0; j < cond.rank(); ++j) top = std::max(top, cond.weight(j));
        const double ceiling =
            conditional_eigenvalue_ceiling(conditional_entropy(ch, t.distribution()), d, k, alpha, n);
        r.check_leq(top, ceiling + 1e-9 * std::max(1.0, ceiling), "conditional eigenvalue ceiling" + tag);
        const ProductSubspace vertex = output_typical_subspace(ch, t, alpha);
        r.check_leq(floor - 1e-9, vertex.trace_against(local), "output-typical mass" + tag);
        if (vertex.rank() > 0) {
          r.check_leq(edge_trace_floor(d, k, alpha) - 1e-9, compressed_edge_Q(vertex, cond).trace(),
                      "edge trace" + tag);
        }
        std::size_t i = n;
        while (i > 0 && digits[i - 1] + 1 == k) digits[--i] = 0;
        if (i == 0) break;
        ++digits[i - 1];
      }
    }
  }
  return r.take();
}

SuiteResult resolve_suite(const CQChannel& ch) {
  Recorder r("fixed_type_resolve");
  const std::size_t k = ch.alphabet_size();
  const std::size_t n = ch.output_dim() * ch.output_dim() <= kMaxAmbientDim ? 2 : 1;
  std::vector<std::size_t> counts(k, 0);
  for (std::size_t i = 0; i < n; ++i) ++counts[i % k];
  const FixedTypeResult res = fixed_type_resolve(ch, make_type(counts), SoftCoverParams{}, 16);
  for (const std::string& v : res.report.violations()) r.check(false, v);
  r.check(res.report.trace_dist >= 0.0 && res.report.trace_dist <= 1.0 + 1e-12, "trace distance range");
  return r.take();
}

}  // namespace

std::vector<SuiteResult> run_verification(const CQChannel& ch, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<SuiteResult> out;
  out.push_back(regret_suite(rng));
  out.push_back(exponential_suite(rng));
  out.push_back(soft_cover_suite(rng));
  out.push_back(channel_suite(ch));
  out.push_back(typicality_suite(ch));
  out.push_back(resolve_suite(ch));
  return out;
}

}  // namespace resolvon
