#include "emit.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <utility>

namespace nearherm::cli {
namespace {

using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string figure_csv(const std::vector<DumpRow>& rows) {
  std::string out = "trial,index,re,im,kind\n";
  for (const DumpRow& row : rows) {
    out += std::to_string(row.trial);
    out += ',';
    out += std::to_string(row.index);
    out += ',';
    out += format_double(row.value.real());
    out += ',';
    out += format_double(row.value.imag());
    out += ',';
    out += to_string(row.kind);
    out += '\n';
  }
  return out;
}

nlohmann::json figure_json(const ConfiguredExperiment& exp,
                           std::uint64_t master_seed,
                           const std::vector<DumpRow>& rows) {
  json j;
  j["name"] = exp.name;
  j["experiment"] = to_string(exp.spec.experiment);
  j["seed"] = master_seed;
  if (exp.circle_radius) j["circle_radius"] = *exp.circle_radius;
  json out_rows = json::array();
  for (const DumpRow& row : rows) {
    json r;
    r["trial"] = row.trial;
    r["index"] = row.index;
    r["re"] = row.value.real();
    r["im"] = row.value.imag();
    r["kind"] = to_string(row.kind);
    out_rows.push_back(std::move(r));
  }
  j["rows"] = std::move(out_rows);
  return j;
}

nlohmann::json experiment_entry_json(const ConfiguredExperiment& exp,
                                     const ExperimentReport& report) {
  json entry;
  entry["name"] = exp.name;
  entry["pass_rate"] = report.aggregate.pass_rate;
  json metrics;
  json means;
  for (const auto& [key, value] : report.aggregate.means) means[key] = value;
  json maxima;
  for (const auto& [key, value] : report.aggregate.maxima) maxima[key] = value;
  metrics["means"] = std::move(means);
  metrics["maxima"] = std::move(maxima);
  entry["metrics"] = std::move(metrics);
  entry["threshold"] = exp.threshold;
  entry["passed"] = report.aggregate.pass_rate + 1e-12 >= exp.threshold;
  return entry;
}

nlohmann::json run_report_json(const RunConfig& config,
                               const std::vector<ExperimentReport>& reports) {
  json j;
  j["config_echo"] = config_to_json(config);
  json per_experiment = json::array();
  for (std::size_t i = 0; i < reports.size(); ++i) {
    per_experiment.push_back(
        experiment_entry_json(config.experiments[i], reports[i]));
  }
  j["per_experiment"] = std::move(per_experiment);
  j["wall_time_ms"] = nullptr;  // kept out of the file for byte stability
  j["seed"] = config.master_seed;
  return j;
}

std::string file_stem(const RunConfig& config, std::size_t index) {
  const std::string& name = config.experiments[index].name;
  std::size_t repeats = 0;
  for (const ConfiguredExperiment& exp : config.experiments) {
    if (exp.name == name) ++repeats;
  }
  if (repeats <= 1) return name;
  return name + "_" + std::to_string(index);
}

void write_file(const std::string& path, const std::string& text) {
  const std::filesystem::path target(path);
  std::error_code ec;
  if (target.has_parent_path()) {
    std::filesystem::create_directories(target.parent_path(), ec);
    if (ec) {
      throw config_error("cannot create directory '" +
                         target.parent_path().string() + "': " + ec.message());
    }
  }
  std::ofstream out(target, std::ios::binary | std::ios::trunc);
  if (!out) throw config_error("cannot open '" + path + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw config_error("failed writing '" + path + "'");
}

}  // namespace nearherm::cli
