#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace nearherm {

/// Outcome of one acceptance criterion: a deterministic detail string with
/// the measured quantities (a pure function of the seed) and the wall time,
/// which callers must keep out of anything required to be byte-stable.
struct CriterionResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// Names of the acceptance criteria in execution order.
const std::vector<std::string>& acceptance_criterion_names();

/// Runs the acceptance suite in a fixed order, deterministically seeded from
/// master_seed.  `on_result`, when set, fires after each criterion completes
/// (for progress output); the returned vector holds all results.  A non-empty
/// `only` restricts the run to the named criteria (each criterion keeps the
/// seed it would get in a full run); unknown names throw config_error.
std::vector<CriterionResult> run_acceptance(
    std::uint64_t master_seed,
    const std::function<void(const CriterionResult&)>& on_result = nullptr,
    const std::vector<std::string>& only = {});

}  // namespace nearherm
