#include "config.hpp"

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace nearherm::cli {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw config_error(path.empty() ? what : path + ": " + what);
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string element(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
}

/// Rejects keys outside the allowed list, naming the offending path.
void require_keys(const json& j, const std::string& path,
                  std::initializer_list<const char*> allowed) {
  require_object(j, path);
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* key : allowed) {
      if (it.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) fail(join(path, it.key()), "unknown key");
  }
}

double get_double(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

std::uint64_t get_seed(const json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer()) {
    const auto v = j.get<std::int64_t>();
    if (v >= 0) return static_cast<std::uint64_t>(v);
  }
  fail(path, "expected a non-negative integer");
}

std::size_t get_positive_size(const json& j, const std::string& path) {
  if (j.is_number_unsigned() && j.get<std::uint64_t>() >= 1) {
    return j.get<std::size_t>();
  }
  if (j.is_number_integer() && j.get<std::int64_t>() >= 1) {
    return static_cast<std::size_t>(j.get<std::int64_t>());
  }
  fail(path, "expected a positive integer");
}

/// A complex value is written as a plain number or a [re, im] pair.
cplx get_complex(const json& j, const std::string& path) {
  if (j.is_number()) return cplx(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return cplx(j[0].get<double>(), j[1].get<double>());
  }
  fail(path, "expected a number or a [re, im] pair");
}

std::vector<cplx> get_complex_vector(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array");
  std::vector<cplx> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(get_complex(j[i], element(path, i)));
  }
  return out;
}

ComplexMatrix get_complex_matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) {
    fail(path, "expected a non-empty array of rows");
  }
  std::vector<std::vector<cplx>> rows;
  rows.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    rows.push_back(get_complex_vector(j[i], element(path, i)));
    if (rows.back().size() != rows.front().size()) {
      fail(element(path, i), "row length differs from the first row");
    }
  }
  ComplexMatrix out(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t k = 0; k < rows[i].size(); ++k) out(i, k) = rows[i][k];
  }
  return out;
}

Normalization normalization_from_string(const std::string& s,
                                        const std::string& path) {
  for (Normalization norm :
       {Normalization::raw, Normalization::one_over_sqrt_n,
        Normalization::one_over_n, Normalization::one_over_sqrt_mn}) {
    if (to_string(norm) == s) return norm;
  }
  fail(path, "unknown normalization '" + s + "'");
}

std::string atom_kind_to_string(AtomSpec::Kind kind) {
  switch (kind) {
    case AtomSpec::Kind::gaussian:
      return "gaussian";
    case AtomSpec::Kind::rademacher:
      return "rademacher";
    case AtomSpec::Kind::uniform:
      return "uniform";
    case AtomSpec::Kind::two_point:
      return "two_point";
  }
  return "gaussian";
}

AtomSpec atom_from_json(const json& j, const std::string& path) {
  require_object(j, path);
  if (!j.contains("kind") || !j.at("kind").is_string()) {
    fail(join(path, "kind"), "expected a string");
  }
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "gaussian") {
    require_keys(j, path, {"kind", "mean", "var"});
    const double mean =
        j.contains("mean") ? get_double(j.at("mean"), join(path, "mean")) : 0.0;
    const double var =
        j.contains("var") ? get_double(j.at("var"), join(path, "var")) : 1.0;
    return AtomSpec::gaussian(mean, var);
  }
  if (kind == "rademacher") {
    require_keys(j, path, {"kind"});
    return AtomSpec::rademacher();
  }
  if (kind == "uniform") {
    require_keys(j, path, {"kind", "lo", "hi"});
    if (!j.contains("lo") || !j.contains("hi")) {
      fail(path, "uniform atom needs lo and hi");
    }
    return AtomSpec::uniform(get_double(j.at("lo"), join(path, "lo")),
                             get_double(j.at("hi"), join(path, "hi")));
  }
  if (kind == "two_point") {
    require_keys(j, path, {"kind", "p", "lo", "hi"});
    if (!j.contains("p") || !j.contains("lo") || !j.contains("hi")) {
      fail(path, "two_point atom needs p, lo and hi");
    }
    return AtomSpec::two_point(get_double(j.at("p"), join(path, "p")),
                               get_double(j.at("lo"), join(path, "lo")),
                               get_double(j.at("hi"), join(path, "hi")));
  }
  fail(join(path, "kind"), "unknown atom kind '" + kind + "'");
}

PerturbationSpec perturbation_from_json(const json& j,
                                        const std::string& path) {
  require_keys(j, path,
               {"kind", "mode", "anchor", "values", "theta", "left", "right",
                "factor_a", "factor_b", "row", "col", "value"});
  if (!j.contains("kind") || !j.at("kind").is_string()) {
    fail(join(path, "kind"), "expected a string");
  }
  PerturbationSpec spec;
  try {
    spec.kind = perturbation_kind_from_string(j.at("kind").get<std::string>());
    if (j.contains("mode")) {
      if (!j.at("mode").is_string()) {
        fail(join(path, "mode"), "expected a string");
      }
      spec.mode = perturbation_mode_from_string(j.at("mode").get<std::string>());
    }
    if (j.contains("anchor")) {
      if (!j.at("anchor").is_string()) {
        fail(join(path, "anchor"), "expected a string");
      }
      spec.anchor =
          perturbation_anchor_from_string(j.at("anchor").get<std::string>());
    }
  } catch (const config_error& e) {
    fail(path, e.what());
  }

  const auto forbid = [&](const char* key) {
    if (j.contains(key)) {
      fail(join(path, key),
           "not a parameter of kind '" + j.at("kind").get<std::string>() + "'");
    }
  };
  switch (spec.kind) {
    case PerturbationSpec::Kind::diagonal: {
      for (const char* key :
           {"theta", "left", "right", "factor_a", "factor_b", "row", "col",
            "value"}) {
        forbid(key);
      }
      if (!j.contains("values")) fail(join(path, "values"), "required");
      spec.values = get_complex_vector(j.at("values"), join(path, "values"));
      break;
    }
    case PerturbationSpec::Kind::rank_one: {
      for (const char* key :
           {"values", "anchor", "factor_a", "factor_b", "row", "col",
            "value"}) {
        forbid(key);
      }
      if (j.contains("theta")) {
        spec.theta = get_complex(j.at("theta"), join(path, "theta"));
      }
      if (!j.contains("left")) fail(join(path, "left"), "required");
      if (!j.contains("right")) fail(join(path, "right"), "required");
      spec.left = get_complex_vector(j.at("left"), join(path, "left"));
      spec.right = get_complex_vector(j.at("right"), join(path, "right"));
      break;
    }
    case PerturbationSpec::Kind::low_rank_factors: {
      for (const char* key :
           {"values", "anchor", "theta", "left", "right", "row", "col",
            "value"}) {
        forbid(key);
      }
      if (!j.contains("factor_a")) fail(join(path, "factor_a"), "required");
      if (!j.contains("factor_b")) fail(join(path, "factor_b"), "required");
      spec.factor_a =
          get_complex_matrix(j.at("factor_a"), join(path, "factor_a"));
      spec.factor_b =
          get_complex_matrix(j.at("factor_b"), join(path, "factor_b"));
      break;
    }
    case PerturbationSpec::Kind::corner_entry: {
      for (const char* key :
           {"values", "anchor", "theta", "left", "right", "factor_a",
            "factor_b"}) {
        forbid(key);
      }
      if (!j.contains("row")) fail(join(path, "row"), "required");
      if (!j.contains("col")) fail(join(path, "col"), "required");
      if (!j.contains("value")) fail(join(path, "value"), "required");
      if (!j.at("row").is_number_integer() || j.at("row").get<std::int64_t>() < 0) {
        fail(join(path, "row"), "expected a non-negative integer");
      }
      if (!j.at("col").is_number_integer() || j.at("col").get<std::int64_t>() < 0) {
        fail(join(path, "col"), "expected a non-negative integer");
      }
      spec.row = j.at("row").get<std::size_t>();
      spec.col = j.at("col").get<std::size_t>();
      spec.value = get_complex(j.at("value"), join(path, "value"));
      break;
    }
  }
  try {
    spec.validate();
  } catch (const config_error& e) {
    fail(path, e.what());
  }
  return spec;
}

std::vector<cplx> standard_basis(std::size_t n, std::size_t index) {
  std::vector<cplx> e(n, cplx(0.0, 0.0));
  e[index] = cplx(1.0, 0.0);
  return e;
}

/// Three spikes well outside the unit circle: one purely imaginary, one
/// complex, one real, anchored at the leading diagonal.
PerturbationSpec wigner_spike_diagonal() {
  return PerturbationSpec::make_diagonal(
      {cplx(0.0, 1.5), cplx(1.0, 1.0), cplx(2.0, 0.0)},
      PerturbationSpec::Anchor::leading, PerturbationSpec::Mode::additive);
}

/// Four spikes for the sample-covariance outlier run, one inside the unit
/// circle on the negative axis, applied multiplicatively.
PerturbationSpec sampcov_spike_diagonal() {
  return PerturbationSpec::make_diagonal(
      {cplx(-1.5, 0.0), cplx(0.0, 1.5), cplx(1.0, 1.0), cplx(2.0, 0.0)},
      PerturbationSpec::Anchor::leading,
      PerturbationSpec::Mode::multiplicative);
}

struct KindDefaults {
  std::size_t n = 100;
  bool uses_m = false;
  std::size_t m = 0;  // 0 means "same as n"
};

KindDefaults defaults_for(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::nonreal_wigner:
      return {100, false, 0};
    case ExperimentKind::nonreal_sampcov:
      return {100, true, 30};
    case ExperimentKind::nonreal_deterministic:
      return {100, false, 0};
    case ExperimentKind::interlacing:
      return {50, false, 0};
    case ExperimentKind::global_law_wigner:
      return {1000, false, 0};
    case ExperimentKind::global_law_mp:
      return {1000, true, 0};
    case ExperimentKind::outliers_wigner:
      return {2000, false, 0};
    case ExperimentKind::outliers_mp:
      return {2000, true, 0};
    case ExperimentKind::bulk_im_bound:
      return {1000, false, 0};
    case ExperimentKind::overlap_wigner:
      return {1000, false, 0};
    case ExperimentKind::overlap_mp:
      return {1000, true, 0};
    case ExperimentKind::critical_points:
      return {2000, false, 0};
    case ExperimentKind::bounds_suite:
      return {100, false, 0};
  }
  return {};
}

EnsembleSpec default_ensemble(ExperimentKind kind, std::size_t n,
                              std::size_t m) {
  switch (kind) {
    case ExperimentKind::nonreal_wigner:
    case ExperimentKind::global_law_wigner:
    case ExperimentKind::outliers_wigner:
    case ExperimentKind::bulk_im_bound:
    case ExperimentKind::overlap_wigner:
    case ExperimentKind::critical_points:
      return EnsembleSpec::goe_normalized(n);
    case ExperimentKind::nonreal_deterministic:
    case ExperimentKind::interlacing:
    case ExperimentKind::bounds_suite:
      return EnsembleSpec::goe(n);
    case ExperimentKind::nonreal_sampcov:
      return EnsembleSpec::sample_covariance(m, n,
                                             AtomSpec::gaussian(0.0, 1.0),
                                             Normalization::raw);
    case ExperimentKind::global_law_mp:
      return EnsembleSpec::sample_covariance(
          m, n, AtomSpec::gaussian(0.0, 1.0),
          m == n ? Normalization::one_over_n
                 : Normalization::one_over_sqrt_mn);
    case ExperimentKind::outliers_mp:
    case ExperimentKind::overlap_mp:
      return EnsembleSpec::sample_covariance(m, n,
                                             AtomSpec::gaussian(0.0, 1.0),
                                             Normalization::one_over_n);
  }
  return EnsembleSpec::goe_normalized(n);
}

std::optional<PerturbationSpec> default_perturbation(ExperimentKind kind,
                                                     std::size_t n) {
  switch (kind) {
    case ExperimentKind::nonreal_wigner:
      return PerturbationSpec::make_diagonal({cplx(0.0, 1.0)},
                                             PerturbationSpec::Anchor::trailing);
    case ExperimentKind::nonreal_sampcov:
      return PerturbationSpec::make_rank_one(
          cplx(0.0, 1.0), standard_basis(n, 0), standard_basis(n, 0),
          PerturbationSpec::Mode::multiplicative);
    case ExperimentKind::outliers_wigner:
    case ExperimentKind::bulk_im_bound:
    case ExperimentKind::critical_points:
      return wigner_spike_diagonal();
    case ExperimentKind::outliers_mp:
      return sampcov_spike_diagonal();
    default:
      return std::nullopt;
  }
}

json complex_to_json(const cplx& z) { return json::array({z.real(), z.imag()}); }

json atom_to_json(const AtomSpec& atom) {
  json j;
  j["kind"] = atom_kind_to_string(atom.kind);
  switch (atom.kind) {
    case AtomSpec::Kind::gaussian:
      j["mean"] = atom.a;
      j["var"] = atom.b;
      break;
    case AtomSpec::Kind::rademacher:
      break;
    case AtomSpec::Kind::uniform:
      j["lo"] = atom.a;
      j["hi"] = atom.b;
      break;
    case AtomSpec::Kind::two_point:
      j["p"] = atom.a;
      j["lo"] = atom.b;
      j["hi"] = atom.c;
      break;
  }
  return j;
}

json perturbation_to_json(const PerturbationSpec& spec) {
  json j;
  j["kind"] = to_string(spec.kind);
  j["mode"] = to_string(spec.mode);
  switch (spec.kind) {
    case PerturbationSpec::Kind::diagonal: {
      j["anchor"] = to_string(spec.anchor);
      json values = json::array();
      for (const cplx& v : spec.values) values.push_back(complex_to_json(v));
      j["values"] = std::move(values);
      break;
    }
    case PerturbationSpec::Kind::rank_one: {
      j["theta"] = complex_to_json(spec.theta);
      json left = json::array();
      for (const cplx& v : spec.left) left.push_back(complex_to_json(v));
      json right = json::array();
      for (const cplx& v : spec.right) right.push_back(complex_to_json(v));
      j["left"] = std::move(left);
      j["right"] = std::move(right);
      break;
    }
    case PerturbationSpec::Kind::low_rank_factors: {
      const auto matrix_rows = [](const ComplexMatrix& m) {
        json rows = json::array();
        for (std::size_t i = 0; i < m.rows(); ++i) {
          json row = json::array();
          for (std::size_t k = 0; k < m.cols(); ++k) {
            row.push_back(complex_to_json(m(i, k)));
          }
          rows.push_back(std::move(row));
        }
        return rows;
      };
      j["factor_a"] = matrix_rows(spec.factor_a);
      j["factor_b"] = matrix_rows(spec.factor_b);
      break;
    }
    case PerturbationSpec::Kind::corner_entry: {
      j["row"] = spec.row;
      j["col"] = spec.col;
      j["value"] = complex_to_json(spec.value);
      break;
    }
  }
  return j;
}

ConfiguredExperiment experiment_from_json(const json& j,
                                          const std::string& path) {
  require_keys(j, path,
               {"experiment", "preset", "n", "m", "trials", "threshold",
                "normalization", "offdiag", "diag", "entry", "perturbation",
                "params"});

  ConfiguredExperiment out;
  bool from_preset = false;
  if (j.contains("preset")) {
    if (j.contains("experiment")) {
      fail(path, "give either 'preset' or 'experiment', not both");
    }
    if (!j.at("preset").is_string()) {
      fail(join(path, "preset"), "expected a string");
    }
    try {
      out = make_preset(j.at("preset").get<std::string>());
    } catch (const config_error& e) {
      fail(join(path, "preset"), e.what());
    }
    from_preset = true;
  } else {
    if (!j.contains("experiment") || !j.at("experiment").is_string()) {
      fail(join(path, "experiment"), "expected a string");
    }
    try {
      out.spec.experiment =
          experiment_kind_from_string(j.at("experiment").get<std::string>());
    } catch (const config_error& e) {
      fail(join(path, "experiment"), e.what());
    }
    out.name = to_string(out.spec.experiment);
  }
  const ExperimentKind kind = out.spec.experiment;
  const KindDefaults dims = defaults_for(kind);

  // Dimensions first: the default ensemble and perturbation depend on them.
  std::size_t n = from_preset ? out.spec.ensemble.n : dims.n;
  std::size_t m = from_preset
                      ? out.spec.ensemble.m
                      : (dims.m == 0 ? n : dims.m);
  if (j.contains("n")) {
    n = get_positive_size(j.at("n"), join(path, "n"));
    if (!j.contains("m") && (!dims.uses_m || dims.m == 0)) m = n;
  }
  if (j.contains("m")) {
    if (!dims.uses_m) {
      fail(join(path, "m"), "only sample-covariance experiments take m");
    }
    m = get_positive_size(j.at("m"), join(path, "m"));
  }

  const bool resized = j.contains("n") || j.contains("m");
  if (!from_preset) {
    out.spec.ensemble = default_ensemble(kind, n, m);
  } else if (resized) {
    // Keep the preset's atoms and scaling, change only the dimensions.
    out.spec.ensemble.n = n;
    out.spec.ensemble.m = m;
  }
  if (j.contains("normalization")) {
    if (!j.at("normalization").is_string()) {
      fail(join(path, "normalization"), "expected a string");
    }
    out.spec.ensemble.normalization = normalization_from_string(
        j.at("normalization").get<std::string>(), join(path, "normalization"));
  }
  if (j.contains("offdiag")) {
    out.spec.ensemble.offdiag =
        atom_from_json(j.at("offdiag"), join(path, "offdiag"));
  }
  if (j.contains("diag")) {
    out.spec.ensemble.diag = atom_from_json(j.at("diag"), join(path, "diag"));
  }
  if (j.contains("entry")) {
    out.spec.ensemble.entry =
        atom_from_json(j.at("entry"), join(path, "entry"));
  }

  if (j.contains("perturbation")) {
    out.spec.perturbation =
        perturbation_from_json(j.at("perturbation"), join(path, "perturbation"));
  } else if (!from_preset || resized) {
    out.spec.perturbation = default_perturbation(kind, n);
  }

  if (j.contains("trials")) {
    out.spec.trials = get_positive_size(j.at("trials"), join(path, "trials"));
  } else if (!from_preset) {
    out.spec.trials = 10;
  }

  if (j.contains("threshold")) {
    const double t = get_double(j.at("threshold"), join(path, "threshold"));
    if (!(t >= 0.0 && t <= 1.0)) {
      fail(join(path, "threshold"), "must lie in [0, 1]");
    }
    out.threshold = t;
  }

  if (j.contains("params")) {
    const json& params = j.at("params");
    require_object(params, join(path, "params"));
    for (auto it = params.begin(); it != params.end(); ++it) {
      out.spec.params[it.key()] =
          get_double(it.value(), join(join(path, "params"), it.key()));
    }
  }
  if (!out.spec.params.count("epsilon")) out.spec.params["epsilon"] = 0.2;

  try {
    out.spec.validate();
  } catch (const config_error& e) {
    fail(path, e.what());
  }
  return out;
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"fig1", "fig2", "fig3",
                                                 "fig4", "fig5"};
  return names;
}

ConfiguredExperiment make_preset(const std::string& name) {
  ConfiguredExperiment out;
  out.name = name;
  if (name == "fig1") {
    // One trailing imaginary diagonal entry on a normalized GOE matrix moves
    // every eigenvalue strictly above the real axis.
    out.spec.experiment = ExperimentKind::nonreal_wigner;
    out.spec.ensemble = EnsembleSpec::goe_normalized(100);
    out.spec.perturbation = default_perturbation(out.spec.experiment, 100);
    out.spec.trials = 10;
  } else if (name == "fig2") {
    // Rank-deficient sample covariance with a multiplicative imaginary
    // rank-one bump: min(m, n) eigenvalues move, the rest stay exactly zero.
    out.spec.experiment = ExperimentKind::nonreal_sampcov;
    out.spec.ensemble = EnsembleSpec::sample_covariance(
        30, 100, AtomSpec::gaussian(0.0, 1.0), Normalization::raw);
    out.spec.perturbation = default_perturbation(out.spec.experiment, 100);
    out.spec.trials = 10;
  } else if (name == "fig3") {
    // Three additive spikes on a normalized GOE matrix; outliers land near
    // the predicted locations, drawn with radius-0.1 circles.
    out.spec.experiment = ExperimentKind::outliers_wigner;
    out.spec.ensemble = EnsembleSpec::goe_normalized(2000);
    out.spec.perturbation = wigner_spike_diagonal();
    out.spec.trials = 10;
    out.spec.params["tolerance"] = 0.1;
    out.circle_radius = 0.1;
  } else if (name == "fig4") {
    // Critical points of the characteristic polynomial shadow the spectrum;
    // small matrix with standard real gaussian atoms everywhere.
    out.spec.experiment = ExperimentKind::critical_points;
    out.spec.ensemble =
        EnsembleSpec::wigner(50, AtomSpec::gaussian(0.0, 1.0),
                             AtomSpec::gaussian(0.0, 1.0),
                             Normalization::one_over_sqrt_n);
    out.spec.perturbation = wigner_spike_diagonal();
    out.spec.trials = 10;
    out.circle_radius = 0.5;
  } else if (name == "fig5") {
    // Four multiplicative spikes on a square sample-covariance matrix, one
    // of them inside the unit circle; radius-0.2 circles at the predictions.
    out.spec.experiment = ExperimentKind::outliers_mp;
    out.spec.ensemble = EnsembleSpec::sample_covariance(
        2000, 2000, AtomSpec::gaussian(0.0, 1.0), Normalization::one_over_n);
    out.spec.perturbation = sampcov_spike_diagonal();
    out.spec.trials = 10;
    out.spec.params["tolerance"] = 0.2;
    out.circle_radius = 0.2;
  } else {
    throw config_error("unknown preset '" + name + "'");
  }
  out.spec.params["epsilon"] = 0.2;
  out.spec.validate();
  return out;
}

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw config_error(std::string("invalid JSON: ") + e.what());
  }
  require_object(root, "");

  // Shorthand: a bare experiment object is a one-experiment run.
  if (root.contains("experiment") || root.contains("preset")) {
    RunConfig config;
    config.experiments.push_back(experiment_from_json(root, ""));
    return config;
  }

  require_keys(root, "", {"master_seed", "output_dir", "emit", "experiments"});
  RunConfig config;
  if (root.contains("master_seed")) {
    config.master_seed = get_seed(root.at("master_seed"), "master_seed");
  }
  if (root.contains("output_dir")) {
    if (!root.at("output_dir").is_string()) {
      fail("output_dir", "expected a string");
    }
    config.output_dir = root.at("output_dir").get<std::string>();
    if (config.output_dir.empty()) fail("output_dir", "must not be empty");
  }
  if (root.contains("emit")) {
    const json& emit = root.at("emit");
    if (!emit.is_array()) fail("emit", "expected an array");
    config.emit_csv = false;
    config.emit_json = false;
    for (std::size_t i = 0; i < emit.size(); ++i) {
      if (!emit[i].is_string()) {
        fail(element("emit", i), "expected a string");
      }
      const std::string fmt = emit[i].get<std::string>();
      if (fmt == "csv") {
        config.emit_csv = true;
      } else if (fmt == "json") {
        config.emit_json = true;
      } else {
        fail(element("emit", i), "unknown format '" + fmt + "'");
      }
    }
  }
  if (!root.contains("experiments")) fail("experiments", "required");
  const json& list = root.at("experiments");
  if (!list.is_array() || list.empty()) {
    fail("experiments", "expected a non-empty array");
  }
  for (std::size_t i = 0; i < list.size(); ++i) {
    config.experiments.push_back(
        experiment_from_json(list[i], element("experiments", i)));
  }
  return config;
}

nlohmann::json config_to_json(const RunConfig& config) {
  json j;
  j["master_seed"] = config.master_seed;
  j["output_dir"] = config.output_dir;
  json emit = json::array();
  if (config.emit_csv) emit.push_back("csv");
  if (config.emit_json) emit.push_back("json");
  j["emit"] = std::move(emit);
  json list = json::array();
  for (const ConfiguredExperiment& exp : config.experiments) {
    json e;
    e["experiment"] = to_string(exp.spec.experiment);
    e["n"] = exp.spec.ensemble.n;
    if (exp.spec.ensemble.family == Family::sample_covariance) {
      e["m"] = exp.spec.ensemble.m;
    }
    e["trials"] = exp.spec.trials;
    e["threshold"] = exp.threshold;
    e["normalization"] = to_string(exp.spec.ensemble.normalization);
    if (exp.spec.ensemble.family == Family::wigner) {
      e["offdiag"] = atom_to_json(exp.spec.ensemble.offdiag);
      e["diag"] = atom_to_json(exp.spec.ensemble.diag);
    } else {
      e["entry"] = atom_to_json(exp.spec.ensemble.entry);
    }
    if (exp.spec.perturbation) {
      e["perturbation"] = perturbation_to_json(*exp.spec.perturbation);
    }
    if (!exp.spec.params.empty()) {
      json params;
      for (const auto& [key, value] : exp.spec.params) params[key] = value;
      e["params"] = std::move(params);
    }
    list.push_back(std::move(e));
  }
  j["experiments"] = std::move(list);
  return j;
}

}  // namespace nearherm::cli
