// resolvon: command-line driver for soft covering and channel resolvability.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "resolvon/channel_spec.hpp"
#include "resolvon/error.hpp"
#include "resolvon/experiment.hpp"

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitCertificate = 1;

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

template <typename T, typename Parse>
std::vector<T> parse_list(const std::string& text, char sep, const char* flag, Parse parse) {
  std::vector<T> out;
  for (const std::string& item : split(text, sep)) {
    try {
      std::size_t used = 0;
      out.push_back(parse(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw resolvon::InputError(std::string(flag) + ": cannot parse '" + item + "'");
    }
  }
  return out;
}

std::vector<std::size_t> parse_counts(const std::string& text) {
  for (char c : text) {
    if (c == '-') throw resolvon::InputError("--type: counts must be non-negative");
  }
  return parse_list<std::size_t>(text, ':', "--type",
                                 [](const std::string& s, std::size_t* used) { return std::stoul(s, used); });
}

std::vector<double> parse_probs(const std::string& text) {
  return parse_list<double>(text, ',', "--iid",
                            [](const std::string& s, std::size_t* used) { return std::stod(s, used); });
}

std::vector<std::uint64_t> parse_grid(const std::string& text) {
  for (char c : text) {
    if (c == '-') throw resolvon::InputError("--grid: sizes must be positive");
  }
  return parse_list<std::uint64_t>(text, ',', "--grid",
                                   [](const std::string& s, std::size_t* used) { return std::stoull(s, used); });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic soft-covering codebooks for classical-quantum channels"};
  app.set_version_flag("--version", "resolvon 0.1.0");

  std::string command, channel_path, format = "json";
  std::optional<std::size_t> n;
  std::optional<std::string> type_text, iid_text, grid_text, out_path;
  std::optional<double> eps, tau, tau0, xi, kappa;
  std::optional<std::uint64_t> codebook_size, seed, trials;

  app.add_option("command", command, "softcover | resolve | baseline | verify | sweep")->required();
  app.add_option("--channel", channel_path, "Channel description (JSON)")->required();
  app.add_option("--n", n, "Block length");
  app.add_option("--type", type_text, "Type counts, e.g. 2:2");
  app.add_option("--iid", iid_text, "Single-letter input distribution, e.g. 0.7,0.3");
  app.add_option("--eps", eps, "MMWU step size epsilon");
  app.add_option("--tau", tau, "Mass slack tau");
  app.add_option("--tau0", tau0, "Pinching threshold tau0");
  app.add_option("--codebook-size", codebook_size, "Codebook size L (per type for i.i.d. inputs)");
  app.add_option("--seed", seed, "Seed for random baselines (baseline, sweep)");
  app.add_option("--trials", trials, "Number of baseline trials (baseline, sweep)");
  app.add_option("--grid", grid_text, "Sweep sizes, e.g. 16,64,256");
  app.add_option("--xi", xi, "Target accuracy; derives epsilon, tau, tau0");
  app.add_option("--kappa", kappa, "Rate slack; sizes codebooks as exp(n (I + kappa))");
  app.add_option("--out", out_path, "Write the report here instead of stdout");
  app.add_option("--format", format, "json | csv (csv for sweep only)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    const std::optional<resolvon::Command> cmd = resolvon::parse_command(command);
    if (!cmd) throw resolvon::InputError("unknown command '" + command + "'");

    resolvon::RunConfig cfg;
    cfg.n = n;
    if (type_text) cfg.type_counts = parse_counts(*type_text);
    if (iid_text) cfg.iid = parse_probs(*iid_text);
    if (grid_text) cfg.grid = parse_grid(*grid_text);
    cfg.epsilon = eps;
    cfg.tau = tau;
    cfg.tau0 = tau0;
    cfg.codebook_size = codebook_size;
    cfg.seed = seed;
    cfg.trials = trials;
    cfg.xi = xi;
    cfg.kappa = kappa;
    cfg.format = format;
    cfg.validate(*cmd);

    const resolvon::ChannelSpec spec = resolvon::load_channel_spec(channel_path);
    const resolvon::ExperimentOutcome outcome = resolvon::run_experiment(spec, cfg, *cmd);
    if (out_path) {
      resolvon::write_report(outcome, *out_path, format);
    } else {
      std::cout << resolvon::render_report(outcome, format);
    }
    for (const std::string& v : outcome.violations) std::cerr << "certificate violation: " << v << "\n";
    return outcome.exit_status == 0 ? 0 : kExitCertificate;
  } catch (const resolvon::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const resolvon::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitCertificate;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
}
