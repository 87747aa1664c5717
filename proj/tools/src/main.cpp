#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "config.hpp"
#include "emit.hpp"
#include "json.hpp"
#include "nearherm/acceptance.hpp"
#include "nearherm/experiments.hpp"

namespace {

using nearherm::CriterionResult;
using nearherm::ExperimentReport;
using nearherm::cli::ConfiguredExperiment;
using nearherm::cli::RunConfig;

constexpr int kExitPass = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfigError = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw nearherm::config_error("cannot read config file '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<std::string> out_dir;
};

void apply_overrides(RunConfig& config, const Overrides& over) {
  if (over.seed) config.master_seed = *over.seed;
  if (over.out_dir) config.output_dir = *over.out_dir;
  if (over.trials) {
    for (ConfiguredExperiment& exp : config.experiments) {
      exp.spec.trials = *over.trials;
      exp.spec.validate();
    }
  }
}

/// Runs every configured experiment, writes the report and figure files, and
/// prints the summary table.  Returns the process exit code.
int execute_run(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<ExperimentReport> reports;
  reports.reserve(config.experiments.size());
  for (std::size_t i = 0; i < config.experiments.size(); ++i) {
    const ConfiguredExperiment& exp = config.experiments[i];
    std::printf("running %-24s (n=%zu, trials=%zu) ...\n", exp.name.c_str(),
                exp.spec.ensemble.n, exp.spec.trials);
    std::fflush(stdout);
    reports.push_back(
        nearherm::run_experiment(exp.spec, config.master_seed));
  }

  const std::string dir = config.output_dir;
  nearherm::cli::write_file(
      dir + "/report.json",
      nearherm::cli::run_report_json(config, reports).dump(2) + "\n");
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (!reports[i].eigenvalue_dump) continue;
    const std::string stem = nearherm::cli::file_stem(config, i);
    if (config.emit_csv) {
      nearherm::cli::write_file(
          dir + "/" + stem + ".csv",
          nearherm::cli::figure_csv(*reports[i].eigenvalue_dump));
    }
    if (config.emit_json) {
      nearherm::cli::write_file(
          dir + "/" + stem + ".json",
          nearherm::cli::figure_json(config.experiments[i],
                                     config.master_seed,
                                     *reports[i].eigenvalue_dump)
                  .dump(2) +
              "\n");
    }
  }

  bool all_passed = true;
  std::printf("\n%-24s %10s %10s  %s\n", "experiment", "pass_rate",
              "threshold", "result");
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const ConfiguredExperiment& exp = config.experiments[i];
    const double rate = reports[i].aggregate.pass_rate;
    const bool passed = rate + 1e-12 >= exp.threshold;
    all_passed = all_passed && passed;
    std::printf("%-24s %10.3f %10.3f  %s\n", exp.name.c_str(), rate,
                exp.threshold, passed ? "pass" : "FAIL");
  }
  const double ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - start)
                        .count();
  std::printf("\nwall time: %.0f ms\nreport: %s/report.json\n", ms,
              dir.c_str());
  return all_passed ? kExitPass : kExitFailure;
}

int execute_verify(std::uint64_t seed, const std::string& out_dir,
                   const std::vector<std::string>& only) {
  const auto start = std::chrono::steady_clock::now();
  const auto results = nearherm::run_acceptance(
      seed, [](const CriterionResult& r) {
        std::printf("[%s] %-28s %7.1f s  %s\n", r.passed ? " ok " : "FAIL",
                    r.name.c_str(), r.seconds, r.detail.c_str());
        std::fflush(stdout);
      },
      only);

  bool all_passed = true;
  nlohmann::json criteria = nlohmann::json::array();
  for (const CriterionResult& r : results) {
    all_passed = all_passed && r.passed;
    nlohmann::json entry;
    entry["name"] = r.name;
    entry["passed"] = r.passed;
    entry["detail"] = r.detail;
    criteria.push_back(std::move(entry));
  }
  nlohmann::json report;
  report["seed"] = seed;
  report["criteria"] = std::move(criteria);
  report["all_passed"] = all_passed;
  nearherm::cli::write_file(out_dir + "/verify_report.json",
                            report.dump(2) + "\n");

  const double ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - start)
                        .count();
  std::printf("\n%zu/%zu criteria passed\nwall time: %.0f ms\nreport: %s/verify_report.json\n",
              static_cast<std::size_t>(
                  std::count_if(results.begin(), results.end(),
                                [](const CriterionResult& r) { return r.passed; })),
              results.size(), ms, out_dir.c_str());
  return all_passed ? kExitPass : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Spectral experiments for low-rank perturbations of Hermitian random "
      "matrices"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand(
      "run", "Run the experiments described by a JSON config file");
  std::string config_path;
  run->add_option("--config", config_path, "Path to the JSON run config")
      ->required();
  Overrides run_over;
  std::uint64_t seed_value = 0;
  std::int64_t trials_value = 0;
  std::string out_value;
  auto* run_seed = run->add_option("--seed", seed_value,
                                   "Override the master seed");
  auto* run_trials = run->add_option(
      "--trials", trials_value, "Override the trial count of every experiment");
  auto* run_out =
      run->add_option("--out", out_value, "Override the output directory");

  // figure
  auto* figure = app.add_subcommand(
      "figure", "Run a built-in figure preset and emit its data files");
  std::string figure_name;
  figure
      ->add_option("name", figure_name,
                   "Preset name (fig1, fig2, fig3, fig4, fig5)")
      ->required();
  auto* fig_seed =
      figure->add_option("--seed", seed_value, "Override the master seed");
  auto* fig_trials =
      figure->add_option("--trials", trials_value, "Override the trial count");
  auto* fig_out =
      figure->add_option("--out", out_value, "Override the output directory");

  // verify
  auto* verify = app.add_subcommand(
      "verify", "Run the acceptance suite and write its report");
  std::uint64_t verify_seed = 42;
  verify->add_option("--seed", verify_seed, "Acceptance suite seed");
  std::string verify_out = ".";
  verify->add_option("--out", verify_out, "Output directory");
  std::vector<std::string> verify_only;
  verify->add_option(
      "--only", verify_only,
      "Comma-separated criterion names to run (default: all)")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    // Help and version requests exit cleanly; anything else is a usage error.
    return code == 0 ? kExitPass : kExitConfigError;
  }

  try {
    if (run->parsed() || figure->parsed()) {
      if (run_seed->count() > 0 || fig_seed->count() > 0) {
        run_over.seed = seed_value;
      }
      if (run_trials->count() > 0 || fig_trials->count() > 0) {
        if (trials_value < 1) {
          throw nearherm::config_error("--trials: expected a positive integer");
        }
        run_over.trials = static_cast<std::size_t>(trials_value);
      }
      if (run_out->count() > 0 || fig_out->count() > 0) {
        run_over.out_dir = out_value;
      }
      RunConfig config;
      if (run->parsed()) {
        config = nearherm::cli::parse_config(read_file(config_path));
      } else {
        config.experiments.push_back(nearherm::cli::make_preset(figure_name));
        config.output_dir = ".";
      }
      apply_overrides(config, run_over);
      return execute_run(config);
    }
    return execute_verify(verify_seed, verify_out, verify_only);
  } catch (const nearherm::config_error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFailure;
  }
}
