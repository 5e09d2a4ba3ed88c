#pragma once

// Self-checks run by the `verify` command: the regret and matrix-inequality
// facts the engine relies on, soft-covering certificates on random
// hypergraphs, and the entropic and typicality bounds on a given channel.

#include <cstdint>
#include <string>
#include <vector>

#include "resolvon/channel.hpp"

namespace resolvon {

struct SuiteResult {
  std::string name;
  std::uint64_t checks = 0;
  std::vector<std::string> failures;  // the first few, with context

  bool passed() const noexcept { return failures.empty(); }
};

/// Every suite, in a fixed order; deterministic for a fixed seed.
std::vector<SuiteResult> run_verification(const CQChannel& ch, std::uint64_t seed = 0);

}  // namespace resolvon
