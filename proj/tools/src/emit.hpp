#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "config.hpp"
#include "json.hpp"
#include "nearherm/experiments.hpp"

namespace nearherm::cli {

/// Figure data as CSV: header `trial,index,re,im,kind`, one row per dumped
/// value at 17 significant digits, ordered by trial and then by the stable
/// per-kind index.  An empty dump yields just the header line.
std::string figure_csv(const std::vector<DumpRow>& rows);

/// JSON mirror of the CSV rows plus the metadata the plot needs (experiment
/// name, seed, and the overlay-circle radius when the preset defines one).
nlohmann::json figure_json(const ConfiguredExperiment& exp,
                           std::uint64_t master_seed,
                           const std::vector<DumpRow>& rows);

/// One per-experiment entry of the machine report:
/// {name, pass_rate, metrics, threshold, passed}.
nlohmann::json experiment_entry_json(const ConfiguredExperiment& exp,
                                     const ExperimentReport& report);

/// The machine report for a whole run: {config_echo, per_experiment,
/// wall_time_ms, seed}.  Report files must be byte-identical across runs
/// with the same configuration and seed, so wall_time_ms is serialized as
/// null; the measured wall time goes to stdout instead.
nlohmann::json run_report_json(const RunConfig& config,
                               const std::vector<ExperimentReport>& reports);

/// File name stem for the i-th experiment: its name, disambiguated with the
/// index when the same name appears more than once in the run.
std::string file_stem(const RunConfig& config, std::size_t index);

/// Writes text to path, creating parent directories; throws config_error on
/// I/O failure.
void write_file(const std::string& path, const std::string& text);

}  // namespace nearherm::cli
