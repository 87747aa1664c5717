#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "nearherm/experiments.hpp"

namespace nearherm::cli {

/// One experiment to execute, with its CLI-level pass gate.
struct ConfiguredExperiment {
  std::string name;       // experiment kind string, used in file names
  ExperimentSpec spec;
  double threshold = 0.95;
  std::optional<double> circle_radius;  // figure-preset annotation only
};

struct RunConfig {
  std::uint64_t master_seed = 42;
  std::string output_dir = ".";
  bool emit_csv = true;
  bool emit_json = true;
  std::vector<ConfiguredExperiment> experiments;
};

/// Names of the built-in figure presets, in order.
const std::vector<std::string>& preset_names();

/// Expands a preset name into a fully configured experiment.
/// Throws config_error for unknown names.
ConfiguredExperiment make_preset(const std::string& name);

/// Parses a JSON run configuration.  The top level is either a full config
/// object ({master_seed, output_dir, emit, experiments: [...]}) or a single
/// experiment object as a shorthand.  Unknown keys are rejected with the
/// offending path; omitted fields take documented defaults (trials=10,
/// threshold=0.95, per-experiment ensembles/perturbations).
/// Throws config_error on any schema violation.
RunConfig parse_config(const std::string& text);

/// The normalized configuration, suitable for echoing into reports:
/// parse_config(dump(config)) round-trips.
nlohmann::json config_to_json(const RunConfig& config);

}  // namespace nearherm::cli
