#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nearherm/ensembles.hpp"
#include "nearherm/laws.hpp"
#include "nearherm/perturbations.hpp"
#include "nearherm/types.hpp"

namespace nearherm {

/// The named experiments the harness can run.  Each one samples matrices,
/// applies a perturbation, and checks a concrete spectral claim per trial.
enum class ExperimentKind {
  nonreal_wigner,         // one imaginary diagonal entry pushes all
                          // eigenvalues strictly off the real axis
  nonreal_sampcov,        // S(I + i gamma v v^*): min(m,n) nonreal
                          // eigenvalues, the rest exactly zero
  nonreal_deterministic,  // explicit u v^* construction moving exactly k
                          // eigenvalues off the axis, preserving the rest
  interlacing,            // principal-minor eigenvalue interlacing plus the
                          // half-plane criterion for interlacing root sets
  global_law_wigner,      // empirical real parts track the semicircle CDF
  global_law_mp,          // empirical real parts track the Marchenko-Pastur
                          // CDF under a multiplicative perturbation
  outliers_wigner,        // spikes with |lambda| > 1 create outliers near
                          // lambda + 1/lambda, and nothing else escapes
  outliers_mp,            // spikes create outliers near lambda(1+1/lambda)^2
  bulk_im_bound,          // non-outlier eigenvalues stay within n^(eps-1) of
                          // the real axis and inside the bulk interval
  overlap_wigner,         // squared projection of the outlier eigenvector
                          // onto the planted direction matches the formula
  overlap_mp,             // sample-covariance version of the overlap limit
  critical_points,        // critical points of the characteristic polynomial
                          // shadow the spectrum, including outliers
  bounds_suite,           // random instances of the deterministic
                          // perturbation inequalities
};

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& name);
const std::vector<ExperimentKind>& all_experiment_kinds();

/// Which limit law an experiment measures against.
enum class LawKind { semicircle, marchenko_pastur };

/// Full description of one experiment run.  `params` holds named numeric
/// knobs; every runner documents its keys and falls back to defaults for
/// missing ones.  Common keys:
///
///   delta       spike gap around modulus 1 (default 0.4; 0.5 for overlaps)
///   epsilon     exponent slack in the bulk bounds (default 0.2)
///   tolerance   outlier-to-prediction matching distance (default 0.1)
///   theta_re/theta_im   planted rank-one strength for overlap runs
///   k, gamma    deterministic construction: eigenvalue count and sign
///   complex_field       1 samples the planted direction from C^n
///   ks_tol      Kolmogorov distance threshold (default 0.05)
struct ExperimentSpec {
  ExperimentKind experiment = ExperimentKind::nonreal_wigner;
  EnsembleSpec ensemble = EnsembleSpec::goe_normalized(100);
  std::optional<PerturbationSpec> perturbation;
  std::size_t trials = 10;
  std::map<std::string, double> params;

  double param(const std::string& key, double fallback) const;
  bool has_param(const std::string& key) const;

  /// Experiment-specific compatibility gate: ensemble family, normalization,
  /// perturbation shape, atom continuity where the statement needs it, and
  /// the spike-gap condition.  Throws config_error with the reason.
  void validate() const;
};

/// Outcome of a single seeded trial.
struct TrialRecord {
  std::size_t trial = 0;
  std::uint64_t seed = 0;  // the substream seed this trial consumed
  bool pass = false;
  std::map<std::string, double> metrics;
};

/// Cross-trial summary: exact pass fraction plus per-metric mean and max.
struct AggregateStats {
  double pass_rate = 0.0;
  std::map<std::string, double> means;
  std::map<std::string, double> maxima;
};

/// Row kinds for emitted spectra.  `prediction` marks analytic outlier
/// locations; `circle_center` marks overlay-circle centers on plots that
/// draw them around predicted outliers.
enum class DumpKind { eigenvalue, critical_point, prediction, circle_center };
std::string to_string(DumpKind kind);

struct DumpRow {
  std::size_t trial = 0;
  std::size_t index = 0;  // running index within (trial, kind)
  cplx value;
  DumpKind kind = DumpKind::eigenvalue;
};

/// Eigenvalue partition against a law's bulk region: `outliers` lie outside
/// the delta'-neighborhood of the support, `bulk` inside, where
/// delta' = delta^2 / (2 (1 + delta)).
struct OutlierClassification {
  std::vector<cplx> outliers;
  std::vector<cplx> bulk;
  double delta = 0.0;
  double delta_prime = 0.0;
};

OutlierClassification classify_outliers(const std::vector<cplx>& spectrum,
                                        LawKind law, double delta);

/// Everything a run produces: per-trial records in trial order, aggregate
/// statistics, and (for spectrum-producing experiments) the dump rows used
/// for figure emission.  `classification` echoes the first trial's outlier
/// partition when the experiment computes one.
struct ExperimentReport {
  ExperimentKind experiment = ExperimentKind::nonreal_wigner;
  std::vector<TrialRecord> per_trial;
  AggregateStats aggregate;
  std::optional<std::vector<DumpRow>> eigenvalue_dump;
  std::optional<OutlierClassification> classification;
};

/// Runners.  Trials are independent: trial t draws its generator from the
/// (master_seed, t) substream, runs concurrently with other trials, and the
/// report is assembled in trial order, so output is a pure function of
/// (spec, master_seed).
ExperimentReport run_nonreal_wigner(const ExperimentSpec& spec,
                                    std::uint64_t master_seed);
ExperimentReport run_nonreal_sampcov(const ExperimentSpec& spec,
                                     std::uint64_t master_seed);
ExperimentReport run_nonreal_deterministic(const ExperimentSpec& spec,
                                           std::uint64_t master_seed);
ExperimentReport run_interlacing(const ExperimentSpec& spec,
                                 std::uint64_t master_seed);
ExperimentReport run_global_law(const ExperimentSpec& spec, LawKind law,
                                std::uint64_t master_seed);
ExperimentReport run_outliers(const ExperimentSpec& spec, LawKind law,
                              std::uint64_t master_seed);
ExperimentReport run_bulk_im_bound(const ExperimentSpec& spec,
                                   std::uint64_t master_seed);
ExperimentReport run_overlap(const ExperimentSpec& spec, LawKind law,
                             std::uint64_t master_seed);
ExperimentReport run_critical_points(const ExperimentSpec& spec,
                                     std::uint64_t master_seed);
ExperimentReport run_bounds_suite(const ExperimentSpec& spec,
                                  std::uint64_t master_seed);

/// Dispatches on spec.experiment.
ExperimentReport run_experiment(const ExperimentSpec& spec,
                                std::uint64_t master_seed);

}  // namespace nearherm
