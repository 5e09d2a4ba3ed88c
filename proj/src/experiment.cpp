#include "resolvon/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "resolvon/error.hpp"
#include "resolvon/resolver.hpp"
#include "resolvon/verification.hpp"

namespace resolvon {

namespace {

template <typename T>
Json opt(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

Json config_json(const RunConfig& cfg) {
  Json j;
  j["n"] = opt(cfg.n);
  j["type"] = opt(cfg.type_counts);
  j["iid"] = opt(cfg.iid);
  j["epsilon"] = opt(cfg.epsilon);
  j["tau"] = opt(cfg.tau);
  j["tau0"] = opt(cfg.tau0);
  j["codebook_size"] = opt(cfg.codebook_size);
  j["seed"] = opt(cfg.seed);
  j["trials"] = opt(cfg.trials);
  j["grid"] = opt(cfg.grid);
  j["xi"] = opt(cfg.xi);
  j["kappa"] = opt(cfg.kappa);
  return j;
}

Json codebook_json(const std::vector<Sequence>& c) {
  Json j = Json::array();
  for (const Sequence& s : c) j.push_back(s);
  return j;
}

std::vector<double> single_letter_distribution(const RunConfig& cfg, std::size_t k) {
  if (cfg.type_counts) {
    const TypeClass t = make_type(*cfg.type_counts);
    if (t.alphabet_size() != k) {
      throw InputError("--type has " + std::to_string(t.alphabet_size()) + " counts but the channel has " +
                       std::to_string(k) + " symbols");
    }
    return t.distribution();
  }
  if (cfg.iid) {
    validate_distribution(*cfg.iid, k);
    return *cfg.iid;
  }
  return std::vector<double>(k, 1.0 / static_cast<double>(k));
}

std::size_t require_n(const RunConfig& cfg, const char* what) {
  if (!cfg.n) throw InputError(std::string(what) + " needs --n or --type");
  if (*cfg.n == 0) throw InputError("--n must be >= 1");
  return *cfg.n;
}

TypeClass config_type(const RunConfig& cfg, std::size_t k) {
  const TypeClass t = make_type(*cfg.type_counts);
  if (t.alphabet_size() != k) {
    throw InputError("--type has " + std::to_string(t.alphabet_size()) + " counts but the channel has " +
                     std::to_string(k) + " symbols");
  }
  if (t.n == 0) throw InputError("--type counts must sum to at least 1");
  if (cfg.n && *cfg.n != t.n) {
    throw InputError("--n " + std::to_string(*cfg.n) + " disagrees with --type, whose counts sum to " +
                     std::to_string(t.n));
  }
  return t;
}

// The distribution over input sequences: uniform on the type class, or i.i.d.
SequenceDistribution sequence_distribution(const RunConfig& cfg, std::size_t k, const char* what) {
  if (cfg.type_counts) return SequenceDistribution::uniform_on(config_type(cfg, k));
  const std::size_t n = require_n(cfg, what);
  return SequenceDistribution::iid(single_letter_distribution(cfg, k), n);
}

std::uint64_t kappa_size(std::size_t n, double info, double kappa) {
  const double v = std::ceil(std::exp(static_cast<double>(n) * (info + kappa)));
  if (!(v <= static_cast<double>(kMaxAutoCodebookSize))) {
    std::ostringstream os;
    os << "kappa-derived codebook size exp(" << n << " * (" << info << " + " << kappa << ")) exceeds "
       << kMaxAutoCodebookSize;
    throw GuardrailError(os.str());
  }
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(v));
}

std::uint64_t auto_size(const SoftCoverParams& params, std::size_t vertex_dim) {
  const SizeRequirement req = required_size(params, vertex_dim, Theorem2Size{});
  if (req.rounds > kMaxAutoCodebookSize) {
    std::ostringstream os;
    os << "required codebook size " << req.rounds << " exceeds the automatic limit of " << kMaxAutoCodebookSize
       << "; pass --codebook-size";
    throw GuardrailError(os.str());
  }
  return req.rounds;
}

void finish(ExperimentOutcome& out) {
  out.report["violations"] = out.violations;
  out.exit_status = out.violations.empty() ? 0 : 1;
}

void add_xi(Json& report, const RunConfig& cfg, double bound) {
  if (!cfg.xi) return;
  report["requested_xi"] = *cfg.xi;
  report["achieved_bound"] = bound;
  report["xi_met"] = bound <= *cfg.xi;
}

void run_softcover(const CQChannel& ch, const RunConfig& cfg, ExperimentOutcome& out) {
  const std::vector<double> p = single_letter_distribution(cfg, ch.alphabet_size());
  const Hypergraph h = channel_hypergraph(ch, p);
  SoftCoverParams params = cfg.cover_params();
  params.eta = h.max_edge_eigenvalue();
  const std::uint64_t l = cfg.codebook_size ? *cfg.codebook_size : auto_size(params, h.vertex_dim());
  const CoverResult res = build_codebook(h, params, l);
  out.report["params"] = to_json(params);
  out.report["distribution"] = p;
  out.report["codebook"] = res.codebook;
  out.report["certificate"] = to_json(res.certificate);
  add_xi(out.report, cfg, res.certificate.theorem2_bound);
  out.violations = res.certificate.violations();
}

void run_resolve(const CQChannel& ch, const RunConfig& cfg, ExperimentOutcome& out) {
  const std::size_t k = ch.alphabet_size();
  const SoftCoverParams params = cfg.cover_params();
  out.report["params"] = to_json(params);
  if (cfg.type_counts) {
    const TypeClass t = config_type(cfg, k);
    std::optional<std::uint64_t> l = cfg.codebook_size;
    if (!l && cfg.kappa) l = kappa_size(t.n, holevo_information(ch, t.distribution()), *cfg.kappa);
    const FixedTypeResult res = fixed_type_resolve(ch, t, params, l);
    out.report["params"]["eta"] = res.report.eta;
    out.report["mode"] = "fixed_type";
    out.report["result"] = to_json(res.report);
    out.report["codebook"] = codebook_json(res.codebook);
    add_xi(out.report, cfg, res.report.bound);
    out.violations = res.report.violations();
    return;
  }
  const std::size_t n = require_n(cfg, "resolve");
  const std::vector<double> p = single_letter_distribution(cfg, k);
  GeneralResolveParams gp;
  gp.cover = params;
  gp.per_type_size = cfg.codebook_size;
  if (!gp.per_type_size && cfg.kappa) gp.per_type_size = kappa_size(n, holevo_information(ch, p), *cfg.kappa);
  const GeneralResolveResult res = general_resolve(ch, SequenceDistribution::iid(p, n), gp);
  out.report["params"]["eta"] = nullptr;  // derived per type, see the components
  out.report["mode"] = "general";
  out.report["distribution"] = p;
  out.report["result"] = to_json(res.report);
  Json parts = Json::array();
  for (std::size_t i = 0; i < res.type_codebooks.size(); ++i) {
    parts.push_back(Json{{"type", res.report.components[i].type.counts},
                         {"multiplicity", res.report.components[i].multiplicity},
                         {"codebook", codebook_json(res.type_codebooks[i])}});
  }
  out.report["codebook"] = std::move(parts);
  add_xi(out.report, cfg, res.report.bound);
  out.violations = res.report.violations();
}

void run_baseline(const CQChannel& ch, const RunConfig& cfg, ExperimentOutcome& out) {
  if (!cfg.codebook_size) throw InputError("baseline needs --codebook-size");
  const SequenceDistribution p_n = sequence_distribution(cfg, ch.alphabet_size(), "baseline");
  const std::uint64_t seed = cfg.seed.value_or(0);
  const std::uint64_t trials = cfg.trials.value_or(kDefaultBaselineTrials);
  out.report["seed"] = seed;
  out.report["trials"] = trials;
  out.report["codebook_size"] = *cfg.codebook_size;
  out.report["stats"] = to_json(random_baseline(ch, p_n, *cfg.codebook_size, seed, trials));
}

void run_verify(const CQChannel& ch, ExperimentOutcome& out) {
  Json suites = Json::array();
  for (const SuiteResult& s : run_verification(ch)) {
    suites.push_back(Json{{"name", s.name}, {"passed", s.passed()}, {"checks", s.checks}, {"failures", s.failures}});
    for (const std::string& f : s.failures) out.violations.push_back(s.name + ": " + f);
  }
  out.report["suites"] = std::move(suites);
}

void run_sweep(const CQChannel& ch, const RunConfig& cfg, ExperimentOutcome& out) {
  std::vector<std::uint64_t> grid = cfg.grid.value_or(kDefaultSweepGrid);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  const std::uint64_t seed = cfg.seed.value_or(0);
  const std::uint64_t trials = cfg.trials.value_or(kDefaultBaselineTrials);
  const SoftCoverParams params = cfg.cover_params();
  const std::size_t k = ch.alphabet_size();
  out.report["seed"] = seed;
  out.report["trials"] = trials;
  out.report["grid"] = grid;

  Json details = Json::array();
  if (cfg.type_counts) {
    const TypeClass t = config_type(cfg, k);
    const FixedTypeInstance inst(ch, t, params);
    const SequenceDistribution p_n = SequenceDistribution::uniform_on(t);
    out.report["mode"] = "fixed_type";
    out.report["params"] = to_json(inst.params());
    CoverRun run = inst.start();
    for (std::uint64_t l : grid) {
      run.advance(l - run.codebook().size());
      ResolvabilityReport r = inst.report(run);
      r.baseline_trace_dist = random_baseline(ch, p_n, l, seed, trials).mean;
      out.rows.push_back({l, r.trace_dist, r.bound, r.d_max, r.required_size, r.baseline_trace_dist});
      for (const std::string& v : r.violations()) out.violations.push_back("L=" + std::to_string(l) + ": " + v);
      details.push_back(to_json(r));
    }
  } else {
    if (cfg.n) throw InputError("sweep uses --type for block inputs; omit --n for the single-letter sweep");
    const std::vector<double> p = single_letter_distribution(cfg, k);
    SequenceDistribution p_1;
    p_1.n = 1;
    for (Symbol x = 0; x < k; ++x) {
      p_1.support.push_back({x});
      p_1.probs.push_back(p[x]);
    }
    const Hypergraph h = channel_hypergraph(ch, p);
    SoftCoverParams sp = params;
    sp.eta = h.max_edge_eigenvalue();
    out.report["mode"] = "single_letter";
    out.report["params"] = to_json(sp);
    out.report["distribution"] = p;
    CoverRun run(h, sp);
    for (std::uint64_t l : grid) {
      run.advance(l - run.codebook().size());
      const CoverCertificate c = run.certificate();
      const double baseline = random_baseline(ch, p_1, l, seed, trials).mean;
      out.rows.push_back({l, c.trace_dist, c.theorem2_bound, c.d_max, c.l_required, baseline});
      for (const std::string& v : c.violations()) out.violations.push_back("L=" + std::to_string(l) + ": " + v);
      details.push_back(to_json(c));
    }
  }
  Json rows = Json::array();
  for (const SweepRow& r : out.rows) rows.push_back(to_json(r));
  out.report["rows"] = std::move(rows);
  out.report["details"] = std::move(details);
}

}  // namespace

std::optional<Command> parse_command(std::string_view name) {
  for (Command c : {Command::kSoftcover, Command::kResolve, Command::kBaseline, Command::kVerify, Command::kSweep}) {
    if (name == command_name(c)) return c;
  }
  return std::nullopt;
}

const char* command_name(Command c) {
  switch (c) {
    case Command::kSoftcover: return "softcover";
    case Command::kResolve: return "resolve";
    case Command::kBaseline: return "baseline";
    case Command::kVerify: return "verify";
    case Command::kSweep: return "sweep";
  }
  return "unknown";
}

void RunConfig::validate(Command c) const {
  const bool seeded = c == Command::kBaseline || c == Command::kSweep;
  if (!seeded && (seed || trials)) {
    throw InputError(std::string("--seed and --trials only apply to baseline and sweep; ") + command_name(c) +
                     " is deterministic");
  }
  if (trials && *trials == 0) throw InputError("--trials must be >= 1");
  if (codebook_size && *codebook_size == 0) throw InputError("--codebook-size must be >= 1");
  if (type_counts && iid) throw InputError("--type and --iid are mutually exclusive");
  if (format != "json" && format != "csv") throw InputError("--format must be json or csv, got '" + format + "'");
  if (format == "csv" && c != Command::kSweep) throw InputError("--format csv is only available for sweep");
  if (c == Command::kSoftcover && n) throw InputError("softcover works on single letters; --n is not accepted");
  if (grid) {
    if (c != Command::kSweep) throw InputError("--grid only applies to sweep");
    for (std::uint64_t l : *grid) {
      if (l == 0) throw InputError("--grid sizes must be >= 1");
    }
  }
  if (xi && !(*xi > 0.0)) throw InputError("--xi must be positive");
  if (kappa && !(*kappa > 0.0)) throw InputError("--kappa must be positive");
  if (c != Command::kVerify && c != Command::kBaseline) cover_params().validate();
}

SoftCoverParams RunConfig::cover_params() const {
  SoftCoverParams p;
  if (xi) {
    const double x2 = *xi * *xi;
    p.epsilon = p.tau = std::min(x2 / 50.0, 0.05);
    p.tau0 = std::min(x2 / 100.0, 0.02);
  }
  if (epsilon) p.epsilon = *epsilon;
  if (tau) p.tau = *tau;
  if (tau0) p.tau0 = *tau0;
  return p;
}

ExperimentOutcome run_experiment(const ChannelSpec& spec, const RunConfig& cfg, Command command) {
  cfg.validate(command);
  const CQChannel ch = spec.channel();
  ExperimentOutcome out;
  out.command = command;
  out.report["command"] = command_name(command);
  out.report["channel"] = Json::parse(serialize_channel_spec(spec));
  out.report["config"] = config_json(cfg);
  switch (command) {
    case Command::kSoftcover: run_softcover(ch, cfg, out); break;
    case Command::kResolve: run_resolve(ch, cfg, out); break;
    case Command::kBaseline: run_baseline(ch, cfg, out); break;
    case Command::kVerify: run_verify(ch, out); break;
    case Command::kSweep: run_sweep(ch, cfg, out); break;
  }
  finish(out);
  return out;
}

std::string render_report(const ExperimentOutcome& outcome, const std::string& format) {
  if (format == "csv") {
    if (outcome.command != Command::kSweep) throw InputError("--format csv is only available for sweep");
    return sweep_csv(outcome.rows);
  }
  if (format != "json") throw InputError("--format must be json or csv, got '" + format + "'");
  return dump_json(outcome.report);
}

void write_report(const ExperimentOutcome& outcome, const std::string& path, const std::string& format) {
  write_text_file(path, render_report(outcome, format));
}

}  // namespace resolvon
