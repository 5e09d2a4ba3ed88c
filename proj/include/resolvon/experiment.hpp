#pragma once

// Command orchestration behind the CLI. Every command is deterministic for a
// fixed (channel spec, config); only `baseline` and `sweep` consume a seed.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "resolvon/channel_spec.hpp"
#include "resolvon/report.hpp"
#include "resolvon/soft_cover.hpp"

namespace resolvon {

enum class Command { kSoftcover, kResolve, kBaseline, kVerify, kSweep };

std::optional<Command> parse_command(std::string_view name);
const char* command_name(Command c);

inline const std::vector<std::uint64_t> kDefaultSweepGrid = {16, 64, 256, 1024, 4096};
inline constexpr std::uint64_t kDefaultBaselineTrials = 20;

struct RunConfig {
  std::optional<std::size_t> n;
  std::optional<std::vector<std::size_t>> type_counts;
  std::optional<std::vector<double>> iid;
  std::optional<double> epsilon;
  std::optional<double> tau;
  std::optional<double> tau0;
  std::optional<std::uint64_t> codebook_size;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::optional<std::vector<std::uint64_t>> grid;
  /// Target accuracy; sets epsilon = tau = min(xi^2/50, 0.05) and
  /// tau0 = min(xi^2/100, 0.02) unless those are given explicitly.
  std::optional<double> xi;
  /// Rate slack; sizes codebooks as ceil(exp(n (I + kappa))) when no explicit
  /// size is given.
  std::optional<double> kappa;
  std::string format = "json";

  /// Rejects options the command does not accept. Throws InputError.
  void validate(Command c) const;
  /// The soft-covering parameters after applying xi and explicit overrides.
  SoftCoverParams cover_params() const;
};

struct ExperimentOutcome {
  Command command = Command::kVerify;
  Json report;
  std::vector<SweepRow> rows;  // sweep only
  std::vector<std::string> violations;
  /// 0 when every asserted certificate holds, 1 otherwise. Invalid input is
  /// reported by exception instead.
  int exit_status = 0;
};

ExperimentOutcome run_experiment(const ChannelSpec& spec, const RunConfig& cfg, Command command);

/// The report text: JSON for any command, CSV only for sweep.
std::string render_report(const ExperimentOutcome& outcome, const std::string& format);
void write_report(const ExperimentOutcome& outcome, const std::string& path, const std::string& format);

}  // namespace resolvon
