// One PASS/FAIL line per acceptance criterion. Exit status is non-zero when
// any criterion fails.

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "classical_oracle.hpp"
#include "resolvon/channel.hpp"
#include "resolvon/experiment.hpp"
#include "resolvon/mmwu.hpp"
#include "resolvon/random_ops.hpp"
#include "resolvon/resolver.hpp"
#include "resolvon/soft_cover.hpp"
#include "resolvon/typicality.hpp"
#include "test_support.hpp"

using namespace resolvon;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, const std::function<Outcome()>& body, double elapsed = -1.0) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (elapsed >= 0.0) secs = elapsed;
  std::printf("%s %2d %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs);
  std::fflush(stdout);
  failures += !o.pass;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double lambda_min(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

// Taylor series with scaling and squaring; independent of the library's
// spectral calculus.
ComplexMatrix expm(const ComplexMatrix& a) {
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int s = 0;
  while (norm / std::ldexp(1.0, s) > 0.25) ++s;
  const ComplexMatrix x = a / std::ldexp(1.0, s);
  ComplexMatrix term = ComplexMatrix::Identity(a.rows(), a.cols());
  ComplexMatrix sum = term;
  for (int k = 1; k <= 24; ++k) {
    term = term * x / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < s; ++i) sum = sum * sum;
  return sum;
}

// Running record of quantities that must hold across every run in the suite.
struct Ledger {
  std::size_t runs = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  std::size_t lemma4_runs = 0;
  double worst_lemma4_gap = -std::numeric_limits<double>::infinity();  // d_max - bound

  void record(const CoverCertificate& c) {
    if (c.lemma2_min_margin) {
      ++runs;
      worst_margin = std::min(worst_margin, *c.lemma2_min_margin);
    }
    if (c.lemma4_holds) {
      ++lemma4_runs;
      worst_lemma4_gap = std::max(worst_lemma4_gap, c.d_max - c.lemma4_bound);
    }
  }
} ledger;

std::vector<double> uniform(std::size_t k) { return std::vector<double>(k, 1.0 / static_cast<double>(k)); }

Hypergraph random_hypergraph(std::size_t dim, std::size_t edges, Rng& rng, bool densities) {
  std::vector<HermitianOperator> es;
  for (std::size_t x = 0; x < edges; ++x) {
    es.push_back(densities || x % 2 ? random_density(dim, rng) : random_unit_interval_operator(dim, rng));
  }
  return Hypergraph(std::move(es), support::random_probabilities(edges, rng));
}

ChannelSpec qubit_pair_spec() {
  return parse_channel_spec(
      R"({"name": "zero-plus", "output_dim": 2, "builtin": {"kind": "pure_bloch", "angles": [[0, 0], [1.5707963267948966, 0]]}})");
}

}  // namespace

int main() {
  criterion(1, "regret bound over 200 random cost sequences", [] {
    Rng rng(1001);
    const double eps_grid[] = {0.05, 0.1, 0.2, 0.3, 0.45};
    double worst = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t dim = 1 + static_cast<std::size_t>(trial % 8);
      const double eps = eps_grid[trial % 5];
      const std::size_t rounds = 1 + static_cast<std::size_t>((trial * 53) % 100);
      MmwuState s(eps, dim);
      ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
      double paid = 0.0;
      for (std::size_t l = 0; l < rounds; ++l) {
        const HermitianOperator m = random_unit_interval_operator(dim, rng);
        paid += (s.density().matrix() * m.matrix()).trace().real();
        s.step(m);
        sum += m.matrix();
      }
      const double slack = lambda_min(sum) + std::log(static_cast<double>(dim)) / eps - (1 - eps) * paid;
      worst = std::min(worst, slack);
    }
    return Outcome{worst >= -1e-8, fmt("min slack %.3g over 200 sequences", worst)};
  });

  criterion(2, "exponential inequalities", [] {
    Rng rng(1002);
    double worst_op = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t dim = 1 + static_cast<std::size_t>(trial % 8);
      const HermitianOperator a = random_unit_interval_operator(dim, rng);
      for (double eps : {0.01, 0.1, 0.25, 0.4, 0.49}) {
        const ComplexMatrix lhs = expm(-eps * a.matrix());
        const ComplexMatrix rhs = ComplexMatrix::Identity(dim, dim) - (1 - std::exp(-eps)) * a.matrix();
        ComplexMatrix gap = rhs - lhs;
        gap = 0.5 * (gap + gap.adjoint()).eval();
        worst_op = std::min(worst_op, lambda_min(gap));
      }
    }
    double worst_scalar = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 10000; ++i) {
      const double eps = 0.5 * i / 10000.0;
      worst_scalar = std::min(worst_scalar, 1 - std::exp(-eps) - eps * (1 - eps));
    }
    double worst_gt = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t dim = 1 + static_cast<std::size_t>(trial % 8);
      const HermitianOperator a = random_hermitian(dim, rng);
      const HermitianOperator b = random_hermitian(dim, rng);
      const double lhs = expm(a.matrix() + b.matrix()).trace().real();
      const double rhs = (expm(a.matrix()) * expm(b.matrix())).trace().real();
      worst_gt = std::min(worst_gt, rhs - lhs + 1e-9);
    }
    const bool ok = worst_op >= -1e-9 && worst_scalar >= 0.0 && worst_gt >= 0.0;
    return Outcome{ok, fmt("operator slack %.3g, scalar slack %.3g, trace slack %.3g", worst_op, worst_scalar,
                           worst_gt - 1e-9)};
  });

  // Criteria 4 and 6 run first so that 3 and 5 can summarize every run.
  Outcome lemma3, end_to_end;
  double secs_lemma3 = 0.0, secs_end_to_end = 0.0;
  {
    const auto start = std::chrono::steady_clock::now();
    Rng rng(1004);
    double worst = std::numeric_limits<double>::infinity();
    std::size_t evaluated = 0;
    for (int trial = 0; trial < 50; ++trial) {
      const std::size_t dim = 2 + static_cast<std::size_t>(trial % 5);
      const Hypergraph h = random_hypergraph(dim, 1 + static_cast<std::size_t>((trial * 7) % 6), rng, false);
      SoftCoverParams p;
      p.epsilon = trial % 2 ? 0.2 : 0.1;
      p.tau = 0.05;
      p.tau0 = 0.05;
      p.eta = h.max_edge_eigenvalue();
      const CostFamily costs = compute_cost_family(h, split_projectors(h, p.tau0));
      const std::uint64_t l = required_size(p, dim, Lemma3Size{costs.d_max}).rounds;
      const CoverResult r = build_codebook(h, p, l);
      ledger.record(r.certificate);
      if (r.certificate.lemma3_holds) ++evaluated;
      worst = std::min(worst, r.certificate.lemma3_margin);
    }
    lemma3 = {worst >= -1e-8 && evaluated == 50, fmt("min eigenvalue %.3g over %g runs", worst, double(evaluated))};
    secs_lemma3 = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  {
    const auto start = std::chrono::steady_clock::now();
    Rng rng(1006);
    double worst = -std::numeric_limits<double>::infinity();
    std::size_t certified = 0;
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t dim = 2 + static_cast<std::size_t>(trial % 5);
      const Hypergraph h = random_hypergraph(dim, 2 + static_cast<std::size_t>(trial % 5), rng, true);
      SoftCoverParams p;
      p.epsilon = p.tau = p.tau0 = 0.05;
      p.eta = h.max_edge_eigenvalue();
      const std::uint64_t l = required_size(p, dim, Theorem2Size{}).rounds;
      const CoverResult r = build_codebook(h, p, l);
      ledger.record(r.certificate);
      if (r.certificate.theorem2_holds) ++certified;
      worst = std::max(worst, r.certificate.trace_dist - r.certificate.theorem2_bound);
    }
    end_to_end = {worst <= 0.0 && certified == 20,
                  fmt("max trace_dist - bound %.3g over %g certified runs (bound %.4f)", worst, double(certified),
                      3 * 0.05 + 3 * 0.05 + 3.5 * 0.05 + std::sqrt(0.2))};
    secs_end_to_end = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }

  criterion(4, "operator inequality at the lemma-3 size", [&] { return lemma3; }, secs_lemma3);
  criterion(6, "end-to-end trace distance at the certified size", [&] { return end_to_end; }, secs_end_to_end);

  criterion(7, "typicality bounds", [] {
    Rng rng(1007);
    std::vector<CQChannel> channels = {support::zero_plus_channel(),
                                       CQChannel({}, {random_density(2, rng), random_density(2, rng)}),
                                       CQChannel({}, {random_density(2, rng), random_density(2, rng)}),
                                       CQChannel({}, {HermitianOperator::diagonal({0.85, 0.15}),
                                                      HermitianOperator::diagonal({0.15, 0.85})})};
    const std::vector<double> alphas = {1.0, 2.0, 4.0, std::sqrt(2.0 * 2 * 2 / 0.1)};
    double rank_slack = std::numeric_limits<double>::infinity();
    double mass_slack = rank_slack, ceiling_slack = rank_slack, output_slack = rank_slack, edge_slack = rank_slack;
    std::size_t checks = 0;
    for (int i = 0; i < 20; ++i) {
      const HermitianOperator rho = random_density(2, rng);
      for (std::size_t n = 1; n <= 8; ++n) {
        for (double alpha : {0.5, 1.0, 2.0, 4.0, alphas.back()}) {
          const double bound = typical_rank_bound(von_neumann_entropy(rho), 2, alpha, n);
          rank_slack = std::min(rank_slack, bound * (1 + 1e-6) - double(typical_subspace(rho, {alpha, n}).rank()));
        }
      }
    }
    for (const CQChannel& ch : channels) {
      for (std::size_t n = 1; n <= 8; ++n) {
        for (double alpha : alphas) {
          for (const TypeClass& t : enumerate_types(2, n)) {
            const double hc = conditional_entropy(ch, t.distribution());
            const ProductSubspace vertex = output_typical_subspace(ch, t, alpha);
            const double vertex_bound =
                typical_rank_bound(von_neumann_entropy(type_output_state(ch, t)), 2, alpha * std::sqrt(2.0), n);
            rank_slack = std::min(rank_slack, vertex_bound * (1 + 1e-6) - double(vertex.rank()));
            const Projector pt = n <= 5 ? vertex.projector() : Projector::zero(1);
            const double ceiling = conditional_eigenvalue_ceiling(hc, 2, 2, alpha, n);
            for (const Sequence& xn : sequences_of(t)) {
              const ProductSubspace cond = conditional_typical_subspace(ch, xn, {alpha, n});
              double cond_mass = 0.0, out_mass = 0.0, top = 0.0;
              if (n <= 5) {
                const HermitianOperator w = ch.sequence_state(xn);
                const Projector pc = cond.projector();
                cond_mass = trace_of_product(w, pc.op());
                out_mass = trace_of_product(w, pt.op());
                top = max_eigenvalue(pinch(w, pc));
              } else {
                // Dense 2^n matrices dominate the runtime here; use the
                // product structure instead. The conditional projector is
                // spanned by eigenvectors of W, so the top eigenvalue of the
                // sandwich is the largest retained weight.
                std::vector<const HermitianOperator*> local;
                for (Symbol x : xn) local.push_back(&ch.state(x));
                out_mass = vertex.trace_against(local);
                for (std::size_t k = 0; k < cond.rank(); ++k) {
                  cond_mass += cond.weight(k);
                  top = std::max(top, cond.weight(k));
                }
              }
              mass_slack = std::min(mass_slack, cond_mass - conditional_mass_floor(2, 2, alpha) + 1e-9);
              ceiling_slack = std::min(ceiling_slack, ceiling + 1e-9 * std::max(1.0, ceiling) - top);
              output_slack = std::min(output_slack, out_mass - conditional_mass_floor(2, 2, alpha) + 1e-9);
              const double tq = vertex.rank() ? compressed_edge_Q(vertex, cond).trace() : 0.0;
              edge_slack = std::min(edge_slack, tq - edge_trace_floor(2, 2, alpha) + 1e-9);
              ++checks;
            }
          }
        }
      }
    }
    const bool ok = rank_slack >= 0 && mass_slack >= 0 && ceiling_slack >= 0 && output_slack >= 0 && edge_slack >= 0;
    Outcome o{ok, fmt("min slacks: rank %.3g, conditional mass %.3g, eigenvalue ceiling %.3g", rank_slack, mass_slack,
                      ceiling_slack)};
    o.detail += fmt(", output mass %.3g, edge trace %.3g over %g sequences", output_slack, edge_slack, double(checks));
    return o;
  });

  criterion(8, "classical channel equals the scalar pipeline", [] {
    const oracle::Rows rows = {{0.8, 0.2}, {0.2, 0.8}};
    const CQChannel ch = support::bsc(0.2);
    SoftCoverParams p;
    double worst = 0.0;
    bool same = true;
    for (std::uint64_t l : {1u, 16u, 256u, 1024u}) {
      const FixedTypeResult r = fixed_type_resolve(ch, make_type({2, 2}), p, l);
      ledger.record(r.report.cover);
      const oracle::FixedTypeRun o = oracle::fixed_type(rows, {2, 2}, p.epsilon, p.tau, p.tau0, l);
      worst = std::max(worst, std::abs(r.report.trace_dist - o.tv));
      same = same && r.codebook.size() == o.codebook.size();
      for (std::size_t i = 0; same && i < o.codebook.size(); ++i) same = r.codebook[i] == o.members[o.codebook[i]];
    }
    return Outcome{same && worst <= 1e-10,
                   std::string(same ? "identical codebooks" : "codebooks differ") +
                       fmt(", max |trace_dist - tv| %.3g for L in {1,16,256,1024}", worst)};
  });

  criterion(9, "brute-force optimum is never beaten", [] {
    const CQChannel ch = support::classical_channel({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    const Hypergraph h = channel_hypergraph(ch, uniform(3));
    SoftCoverParams p;
    bool ok = true;
    std::string detail;
    for (std::uint64_t l : {1u, 2u, 3u}) {
      const CoverResult r = build_codebook(h, p, l);
      ledger.record(r.certificate);
      const OracleResult best = brute_force_oracle(ch, uniform(3), l);
      ok = ok && r.certificate.trace_dist >= best.trace_dist - 1e-12;
      if (l == 3) ok = ok && r.certificate.trace_dist <= 1e-10 && best.trace_dist <= 1e-10;
      detail += fmt("L=%g: %.4g vs %.4g; ", double(l), r.certificate.trace_dist, best.trace_dist);
    }
    return Outcome{ok, detail};
  });

  RunConfig sweep_cfg;
  sweep_cfg.n = 4;
  sweep_cfg.type_counts = std::vector<std::size_t>{2, 2};
  ExperimentOutcome sweep;
  criterion(10, "trace distance shrinks along the sweep", [&] {
    sweep = run_experiment(qubit_pair_spec(), sweep_cfg, Command::kSweep);
    for (const Json& d : sweep.report["details"]) {
      ledger.runs += 1;
      ledger.worst_margin = std::min(ledger.worst_margin, d["cover"]["lemma2_min_margin"].get<double>());
    }
    const auto& rows = sweep.rows;
    std::string detail;
    for (const SweepRow& r : rows) detail += fmt("L=%g %.3g; ", double(r.l), r.trace_dist);
    const bool ok = rows.size() == 5 && rows.front().l == 16 && rows.back().l == 4096 &&
                    rows.back().trace_dist <= 0.5 * rows.front().trace_dist;
    return Outcome{ok, detail};
  });

  criterion(11, "reports are byte-identical across runs", [&] {
    RunConfig resolve_cfg = sweep_cfg;
    resolve_cfg.codebook_size = 64;
    RunConfig soft_cfg;
    soft_cfg.codebook_size = 100;
    RunConfig general_cfg;
    general_cfg.n = 3;
    general_cfg.iid = std::vector<double>{0.6, 0.4};
    general_cfg.codebook_size = 8;
    const ChannelSpec spec = qubit_pair_spec();
    bool ok = true;
    for (const auto& [cfg, cmd] : std::vector<std::pair<RunConfig, Command>>{
             {resolve_cfg, Command::kResolve}, {general_cfg, Command::kResolve}, {soft_cfg, Command::kSoftcover}}) {
      ok = ok && render_report(run_experiment(spec, cfg, cmd), "json") ==
                     render_report(run_experiment(spec, cfg, cmd), "json");
    }
    const ExperimentOutcome again = run_experiment(spec, sweep_cfg, Command::kSweep);
    ok = ok && render_report(again, "json") == render_report(sweep, "json") &&
         render_report(again, "csv") == render_report(sweep, "csv");
    return Outcome{ok, "resolve (fixed type and general), softcover, sweep json and csv"};
  });

  criterion(12, "sweep report carries the random-coding baseline", [&] {
    bool ok = sweep.report["trials"] == 20;
    std::string detail;
    for (const Json& row : sweep.report["rows"]) {
      ok = ok && row["baseline_mean"].is_number();
      if (row["baseline_mean"].is_number()) {
        detail += fmt("L=%g %.3g; ", row["L"].get<double>(), row["baseline_mean"].get<double>());
      }
    }
    ok = ok && render_report(sweep, "csv").find(",,") == std::string::npos;
    return Outcome{ok, "baseline mean over 20 seeded trials: " + detail};
  });

  criterion(3, "per-round margin in every codebook run", [] {
    return Outcome{ledger.worst_margin >= -1e-9 && ledger.runs > 0,
                   fmt("min margin %.3g over %g runs", ledger.worst_margin, double(ledger.runs))};
  });
  criterion(5, "d_max bound in every certified run", [] {
    return Outcome{ledger.worst_lemma4_gap <= 1e-9 && ledger.lemma4_runs > 0,
                   fmt("max d_max - ln(eta dim / tau0) %.3g over %g runs", ledger.worst_lemma4_gap,
                       double(ledger.lemma4_runs))};
  });

  std::printf("%s: %d of 12 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
