#include <string>

#include "config.hpp"
#include "doctest.h"
#include "emit.hpp"
#include "json.hpp"

using namespace nearherm;
using namespace nearherm::cli;
using nlohmann::json;

TEST_CASE("shorthand config fills documented defaults") {
  const RunConfig cfg =
      parse_config(R"({"experiment": "outliers_wigner", "n": 200})");
  CHECK(cfg.master_seed == 42);
  CHECK(cfg.output_dir == ".");
  CHECK(cfg.emit_csv);
  CHECK(cfg.emit_json);
  REQUIRE(cfg.experiments.size() == 1);
  const ConfiguredExperiment& exp = cfg.experiments[0];
  CHECK(exp.name == "outliers_wigner");
  CHECK(exp.threshold == 0.95);
  CHECK(exp.spec.trials == 10);
  CHECK(exp.spec.ensemble.n == 200);
  CHECK(exp.spec.ensemble.family == Family::wigner);
  CHECK(exp.spec.ensemble.normalization == Normalization::one_over_sqrt_n);
  REQUIRE(exp.spec.perturbation.has_value());
  CHECK_NOTHROW(exp.spec.validate());
}

TEST_CASE("full schema with explicit fields") {
  const RunConfig cfg = parse_config(R"({
    "master_seed": 7,
    "output_dir": "out",
    "emit": ["json"],
    "experiments": [
      {
        "experiment": "bounds_suite",
        "n": 40,
        "trials": 25,
        "threshold": 1.0,
        "params": {"perturbation_scale": 0.25}
      }
    ]
  })");
  CHECK(cfg.master_seed == 7);
  CHECK(cfg.output_dir == "out");
  CHECK_FALSE(cfg.emit_csv);
  CHECK(cfg.emit_json);
  REQUIRE(cfg.experiments.size() == 1);
  CHECK(cfg.experiments[0].spec.trials == 25);
  CHECK(cfg.experiments[0].threshold == 1.0);
  CHECK(cfg.experiments[0].spec.param("perturbation_scale", 0.0) == 0.25);
}

TEST_CASE("unknown keys are rejected with their path") {
  try {
    parse_config(R"({"experiment": "bounds_suite", "n": 10, "spice": 1})");
    FAIL("expected config_error");
  } catch (const config_error& err) {
    const std::string what = err.what();
    CHECK(what.find("spice") != std::string::npos);
  }
  try {
    parse_config(R"({
      "experiments": [
        {"experiment": "bounds_suite", "n": 10,
         "offdiag": {"kind": "gaussian", "mean": 0, "var": 1, "skew": 3}}
      ]
    })");
    FAIL("expected config_error");
  } catch (const config_error& err) {
    const std::string what = err.what();
    CHECK(what.find("skew") != std::string::npos);
    CHECK(what.find("offdiag") != std::string::npos);
  }
}

TEST_CASE("schema violations carry precise complaints") {
  // Invalid JSON text.
  CHECK_THROWS_AS(parse_config("{not json"), config_error);
  // Negative trial count.
  CHECK_THROWS_AS(
      parse_config(R"({"experiment": "bounds_suite", "trials": -3})"),
      config_error);
  // Threshold outside [0, 1].
  CHECK_THROWS_AS(
      parse_config(R"({"experiment": "bounds_suite", "threshold": 1.5})"),
      config_error);
  // Unknown experiment kind.
  CHECK_THROWS_AS(parse_config(R"({"experiment": "levitation"})"),
                  config_error);
  // Unknown emit channel.
  CHECK_THROWS_AS(parse_config(R"({"emit": ["yaml"], "experiments": []})"),
                  config_error);
  // preset and experiment are mutually exclusive.
  CHECK_THROWS_AS(
      parse_config(
          R"({"experiments": [{"preset": "fig1", "experiment": "bounds_suite"}]})"),
      config_error);
}

TEST_CASE("presets expand to validated experiments") {
  CHECK(preset_names().size() == 5);
  for (const std::string& name : preset_names()) {
    const ConfiguredExperiment exp = make_preset(name);
    CHECK_NOTHROW(exp.spec.validate());
  }
  CHECK_THROWS_AS(make_preset("fig9"), config_error);

  const ConfiguredExperiment fig3 = make_preset("fig3");
  CHECK(fig3.spec.experiment == ExperimentKind::outliers_wigner);
  CHECK(fig3.spec.ensemble.n == 2000);
  CHECK(fig3.spec.param("tolerance", 0.0) == 0.1);
  REQUIRE(fig3.circle_radius.has_value());
  CHECK(*fig3.circle_radius == 0.1);
  REQUIRE(fig3.spec.perturbation.has_value());
  CHECK(fig3.spec.perturbation->values.size() == 3);

  // Preset via config, resized: dimensions change, spikes survive.
  const RunConfig cfg = parse_config(
      R"({"experiments": [{"preset": "fig3", "n": 300, "trials": 2}]})");
  REQUIRE(cfg.experiments.size() == 1);
  CHECK(cfg.experiments[0].spec.ensemble.n == 300);
  CHECK(cfg.experiments[0].spec.trials == 2);
  CHECK(cfg.experiments[0].spec.perturbation->values.size() == 3);
}

TEST_CASE("config echo round trips through the parser") {
  const RunConfig cfg = parse_config(R"({
    "master_seed": 11,
    "experiments": [
      {"preset": "fig1"},
      {"experiment": "bounds_suite", "n": 12, "trials": 3}
    ]
  })");
  const json echo = config_to_json(cfg);
  const RunConfig again = parse_config(echo.dump());
  CHECK(again.master_seed == cfg.master_seed);
  CHECK(again.output_dir == cfg.output_dir);
  REQUIRE(again.experiments.size() == cfg.experiments.size());
  for (std::size_t i = 0; i < cfg.experiments.size(); ++i) {
    CHECK(again.experiments[i].name == cfg.experiments[i].name);
    CHECK(again.experiments[i].threshold == cfg.experiments[i].threshold);
    CHECK(again.experiments[i].spec.trials == cfg.experiments[i].spec.trials);
    CHECK(again.experiments[i].spec.ensemble.n ==
          cfg.experiments[i].spec.ensemble.n);
    CHECK(config_to_json(again) == echo);
  }
}

TEST_CASE("figure csv golden output") {
  std::vector<DumpRow> rows;
  rows.push_back(DumpRow{0, 0, cplx(1.5, -0.25), DumpKind::eigenvalue});
  rows.push_back(DumpRow{0, 0, cplx(2.5, 0.0), DumpKind::prediction});
  rows.push_back(DumpRow{1, 0, cplx(0.1, 0.2), DumpKind::eigenvalue});
  const std::string csv = figure_csv(rows);
  CHECK(csv ==
        "trial,index,re,im,kind\n"
        "0,0,1.5,-0.25,eigenvalue\n"
        "0,0,2.5,0,prediction\n"
        "1,0,0.10000000000000001,0.20000000000000001,eigenvalue\n");
  CHECK(figure_csv({}) == "trial,index,re,im,kind\n");
}

TEST_CASE("report json carries a null wall time and the seed") {
  const RunConfig cfg =
      parse_config(R"({"experiment": "bounds_suite", "n": 10, "trials": 2})");
  ExperimentReport rep = run_experiment(cfg.experiments[0].spec, 42);
  const json report = run_report_json(cfg, {rep});
  CHECK(report.at("wall_time_ms").is_null());
  CHECK(report.at("seed") == 42);
  CHECK(report.at("config_echo") == config_to_json(cfg));
  REQUIRE(report.at("per_experiment").size() == 1);
  const json& entry = report.at("per_experiment")[0];
  CHECK(entry.at("name") == "bounds_suite");
  CHECK(entry.at("threshold") == 0.95);
  CHECK(entry.at("pass_rate").is_number());
  CHECK(entry.at("passed").is_boolean());
  CHECK(entry.at("metrics").contains("means"));
  CHECK(entry.at("metrics").contains("maxima"));
}

TEST_CASE("file stems disambiguate duplicates") {
  const RunConfig cfg = parse_config(R"({
    "experiments": [
      {"experiment": "bounds_suite", "n": 10},
      {"experiment": "bounds_suite", "n": 20},
      {"experiment": "interlacing", "n": 10}
    ]
  })");
  CHECK(file_stem(cfg, 0) == "bounds_suite_0");
  CHECK(file_stem(cfg, 1) == "bounds_suite_1");
  CHECK(file_stem(cfg, 2) == "interlacing");
}

TEST_CASE("figure json mirrors the dump with metadata") {
  const ConfiguredExperiment exp = make_preset("fig1");
  std::vector<DumpRow> rows;
  rows.push_back(DumpRow{0, 4, cplx(0.5, 0.125), DumpKind::eigenvalue});
  const json fig = figure_json(exp, 99, rows);
  CHECK(fig.at("experiment") == "nonreal_wigner");
  CHECK(fig.at("seed") == 99);
  REQUIRE(fig.at("rows").size() == 1);
  CHECK(fig.at("rows")[0].at("trial") == 0);
  CHECK(fig.at("rows")[0].at("index") == 4);
  CHECK(fig.at("rows")[0].at("re") == 0.5);
  CHECK(fig.at("rows")[0].at("im") == 0.125);
  CHECK(fig.at("rows")[0].at("kind") == "eigenvalue");
}
