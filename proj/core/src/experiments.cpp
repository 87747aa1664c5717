#include "nearherm/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "nearherm/bounds.hpp"
#include "nearherm/eig.hpp"
#include "nearherm/linalg.hpp"
#include "nearherm/polynomial.hpp"
#include "nearherm/rng.hpp"

namespace nearherm {

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::nonreal_wigner:
      return "nonreal_wigner";
    case ExperimentKind::nonreal_sampcov:
      return "nonreal_sampcov";
    case ExperimentKind::nonreal_deterministic:
      return "nonreal_deterministic";
    case ExperimentKind::interlacing:
      return "interlacing";
    case ExperimentKind::global_law_wigner:
      return "global_law_wigner";
    case ExperimentKind::global_law_mp:
      return "global_law_mp";
    case ExperimentKind::outliers_wigner:
      return "outliers_wigner";
    case ExperimentKind::outliers_mp:
      return "outliers_mp";
    case ExperimentKind::bulk_im_bound:
      return "bulk_im_bound";
    case ExperimentKind::overlap_wigner:
      return "overlap_wigner";
    case ExperimentKind::overlap_mp:
      return "overlap_mp";
    case ExperimentKind::critical_points:
      return "critical_points";
    case ExperimentKind::bounds_suite:
      return "bounds_suite";
  }
  return "unknown";
}

ExperimentKind experiment_kind_from_string(const std::string& name) {
  for (ExperimentKind kind : all_experiment_kinds()) {
    if (to_string(kind) == name) return kind;
  }
  throw config_error("unknown experiment '" + name + "'");
}

const std::vector<ExperimentKind>& all_experiment_kinds() {
  static const std::vector<ExperimentKind> kinds = {
      ExperimentKind::nonreal_wigner,
      ExperimentKind::nonreal_sampcov,
      ExperimentKind::nonreal_deterministic,
      ExperimentKind::interlacing,
      ExperimentKind::global_law_wigner,
      ExperimentKind::global_law_mp,
      ExperimentKind::outliers_wigner,
      ExperimentKind::outliers_mp,
      ExperimentKind::bulk_im_bound,
      ExperimentKind::overlap_wigner,
      ExperimentKind::overlap_mp,
      ExperimentKind::critical_points,
      ExperimentKind::bounds_suite,
  };
  return kinds;
}

std::string to_string(DumpKind kind) {
  switch (kind) {
    case DumpKind::eigenvalue:
      return "eigenvalue";
    case DumpKind::critical_point:
      return "critical_point";
    case DumpKind::prediction:
      return "prediction";
    case DumpKind::circle_center:
      return "circle_center";
  }
  return "unknown";
}

double ExperimentSpec::param(const std::string& key, double fallback) const {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

bool ExperimentSpec::has_param(const std::string& key) const {
  return params.find(key) != params.end();
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double signum(double x) { return x < 0.0 ? -1.0 : 1.0; }

bool atom_is_continuous(const AtomSpec& atom) {
  if (atom.kind == AtomSpec::Kind::gaussian) return atom.b > 0.0;
  if (atom.kind == AtomSpec::Kind::uniform) return atom.a < atom.b;
  return false;
}

[[noreturn]] void fail_config(const ExperimentSpec& spec,
                              const std::string& why) {
  throw config_error(to_string(spec.experiment) + ": " + why);
}

/// The single nonzero diagonal value of a validated nonreal-wigner
/// perturbation.
cplx single_diagonal_value(const PerturbationSpec& p) {
  for (const cplx& v : p.values) {
    if (v != cplx(0.0, 0.0)) return v;
  }
  return cplx(0.0, 0.0);
}

bool is_standard_basis_vector(const std::vector<cplx>& v) {
  std::size_t ones = 0;
  for (const cplx& x : v) {
    if (x == cplx(1.0, 0.0)) {
      ++ones;
    } else if (x != cplx(0.0, 0.0)) {
      return false;
    }
  }
  return ones == 1;
}

/// Spike-gap gate shared by the outlier-style experiments: every eigenvalue
/// of P must satisfy ||lambda| - 1| >= delta, including the implicit zero
/// eigenvalues of a low-rank P.
void require_spike_gap(const ExperimentSpec& spec,
                       const std::vector<cplx>& spikes, double delta) {
  if (delta <= 0.0) fail_config(spec, "delta must be positive");
  for (const cplx& s : spikes) {
    if (std::abs(1.0 - std::abs(s)) < delta) {
      fail_config(spec,
                  "perturbation eigenvalue with modulus " +
                      std::to_string(std::abs(s)) +
                      " violates the delta-gap around 1 (delta = " +
                      std::to_string(delta) + ")");
    }
  }
  if (spikes.size() < spec.ensemble.n && delta > 1.0) {
    fail_config(spec,
                "zero eigenvalues of a low-rank perturbation violate a "
                "delta-gap wider than 1");
  }
}

void require_kind(const ExperimentSpec& spec, ExperimentKind kind) {
  if (spec.experiment != kind) {
    throw contract_error("experiment runner for '" + to_string(kind) +
                         "' called with a spec for '" +
                         to_string(spec.experiment) + "'");
  }
}

// ---------------------------------------------------------------------------
// Trial plumbing.

struct TrialOutput {
  TrialRecord record;
  std::vector<DumpRow> rows;
  std::optional<OutlierClassification> classification;
};

/// Runs one body per trial index on a worker pool sized by the hardware
/// thread count.  Outputs land in slots indexed by trial, so the assembled
/// report does not depend on scheduling; the first raised exception (by
/// trial order) propagates after all workers finish.
std::vector<TrialOutput> run_trials(
    std::size_t trials, std::uint64_t master_seed,
    const std::function<TrialOutput(std::size_t, const SeedPlan&)>& body) {
  std::vector<TrialOutput> out(trials);
  std::vector<std::exception_ptr> errors(trials);
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= trials) return;
      const SeedPlan plan{master_seed, t};
      try {
        out[t] = body(t, plan);
      } catch (...) {
        errors[t] = std::current_exception();
      }
      out[t].record.trial = t;
      out[t].record.seed = plan.stream_seed();
      for (DumpRow& row : out[t].rows) row.trial = t;
    }
  };
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  const std::size_t workers = std::min<std::size_t>(trials, hw);
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& th : pool) th.join();
  }
  for (std::size_t t = 0; t < trials; ++t) {
    if (errors[t]) std::rethrow_exception(errors[t]);
  }
  return out;
}

ExperimentReport assemble(ExperimentKind kind,
                          std::vector<TrialOutput> outputs, bool with_dump) {
  ExperimentReport report;
  report.experiment = kind;
  std::vector<DumpRow> rows;
  std::size_t passes = 0;
  for (TrialOutput& out : outputs) {
    if (out.record.pass) ++passes;
    if (out.classification && !report.classification) {
      report.classification = std::move(out.classification);
    }
    if (with_dump) {
      std::map<DumpKind, std::size_t> counters;
      for (DumpRow& row : out.rows) {
        row.index = counters[row.kind]++;
        rows.push_back(row);
      }
    }
    report.per_trial.push_back(std::move(out.record));
  }
  report.aggregate.pass_rate =
      outputs.empty()
          ? 0.0
          : static_cast<double>(passes) / static_cast<double>(outputs.size());
  std::map<std::string, std::pair<double, std::size_t>> sums;
  for (const TrialRecord& rec : report.per_trial) {
    for (const auto& [key, value] : rec.metrics) {
      auto& slot = sums[key];
      slot.first += value;
      slot.second += 1;
      auto [it, fresh] = report.aggregate.maxima.try_emplace(key, value);
      if (!fresh) it->second = std::max(it->second, value);
    }
  }
  for (const auto& [key, acc] : sums) {
    report.aggregate.means[key] =
        acc.first / static_cast<double>(acc.second);
  }
  if (with_dump) report.eigenvalue_dump = std::move(rows);
  return report;
}

void push_values(std::vector<DumpRow>& rows, const std::vector<cplx>& values,
                 DumpKind kind) {
  for (const cplx& v : values) rows.push_back(DumpRow{0, 0, v, kind});
}

double trace_imag_gap(const std::vector<cplx>& eigenvalues,
                      const ComplexMatrix& a) {
  double sum = 0.0;
  for (const cplx& ev : eigenvalues) sum += ev.imag();
  return std::abs(sum - a.trace().imag());
}

ComplexMatrix leading_minor(const ComplexMatrix& m) {
  const std::size_t n = m.rows();
  ComplexMatrix b(n - 1, n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = 0; j + 1 < n; ++j) b(i, j) = m(i, j);
  }
  return b;
}

/// Spike eigenvalues above the outlier threshold and their predicted
/// locations, in spectral order.
std::vector<cplx> outlier_predictions(const std::vector<cplx>& spikes,
                                      LawKind law, double delta) {
  std::vector<cplx> strong;
  for (const cplx& s : spikes) {
    if (std::abs(s) >= 1.0 + delta) strong.push_back(s);
  }
  sort_spectrum(strong);
  std::vector<cplx> predictions;
  for (const cplx& s : strong) {
    const std::optional<Prediction> p =
        law == LawKind::semicircle ? outlier_wigner(s) : outlier_mp(s);
    predictions.push_back(p->value);
  }
  return predictions;
}

/// Largest pairwise distance of an optimal matching, or +inf on size
/// mismatch.
double max_match_distance(const std::vector<cplx>& a,
                          const std::vector<cplx>& b) {
  if (a.size() != b.size()) return kInf;
  if (a.empty()) return 0.0;
  const MatchResult match = match_spectra(a, b);
  double worst = 0.0;
  for (double c : match.pair_costs) worst = std::max(worst, c);
  return std::sqrt(worst);
}

/// Incremental numeric CDF of the Marchenko-Pastur law with ratio y != 1.
/// With `conditional_nonzero` false this is the full mixed law (point mass
/// 1 - y at the origin when y < 1); with it true, the continuous part alone
/// rescaled to total mass one.  Queries are expected mostly ascending; a
/// descending query restarts the integral.
std::function<double(double)> make_mp_cdf(double y,
                                          bool conditional_nonzero = false) {
  const double sy = std::sqrt(y);
  const double lo = sy * (1.0 - 1.0 / sy) * (1.0 - 1.0 / sy);
  const double hi = sy * (1.0 + 1.0 / sy) * (1.0 + 1.0 / sy);
  const double base = !conditional_nonzero && y < 1.0 ? 1.0 - y : 0.0;
  const double mass = conditional_nonzero ? std::min(y, 1.0) : 1.0;
  struct State {
    double last_x;
    double acc;
  };
  auto state = std::make_shared<State>(State{lo, 0.0});
  return [=](double x) -> double {
    if (x < 0.0) return 0.0;
    if (x <= lo) return base;
    double from = state->last_x;
    double acc = state->acc;
    if (x < from) {
      from = lo;
      acc = 0.0;
    }
    const double to = std::min(x, hi);
    if (to > from) {
      acc += adaptive_simpson(
                 [&](double t) { return cplx(mp_density(t, y), 0.0); }, from,
                 to, 1e-10)
                 .real();
      state->last_x = to;
      state->acc = acc;
    }
    return std::min(1.0, base + acc / mass);
  };
}

LawKind law_of_family(Family family) {
  return family == Family::wigner ? LawKind::semicircle
                                  : LawKind::marchenko_pastur;
}

}  // namespace

OutlierClassification classify_outliers(const std::vector<cplx>& spectrum,
                                        LawKind law, double delta) {
  if (delta <= 0.0) {
    throw contract_error("classify_outliers: delta must be positive");
  }
  OutlierClassification cls;
  cls.delta = delta;
  cls.delta_prime = delta_prime(delta);
  const Region region = law == LawKind::semicircle
                            ? Region::semicircle_nbhd(cls.delta_prime)
                            : Region::mp_nbhd(cls.delta_prime);
  for (const cplx& z : spectrum) {
    (region_contains(region, z) ? cls.bulk : cls.outliers).push_back(z);
  }
  return cls;
}

void ExperimentSpec::validate() const {
  try {
    ensemble.validate();
  } catch (const contract_error& err) {
    throw config_error(std::string("ensemble: ") + err.what());
  }
  if (trials == 0) fail_config(*this, "trials must be at least 1");
  const std::size_t n = ensemble.n;

  const auto need_perturbation = [&]() -> const PerturbationSpec& {
    if (!perturbation) fail_config(*this, "a perturbation is required");
    perturbation->validate();
    return *perturbation;
  };
  const auto require_family = [&](Family family, const char* what) {
    if (ensemble.family != family) fail_config(*this, what);
  };
  const auto require_mp_scaling = [&]() {
    require_family(Family::sample_covariance,
                   "requires a sample-covariance ensemble");
    if (ensemble.m != ensemble.n) {
      fail_config(*this, "requires square sample covariance (m == n)");
    }
    if (ensemble.normalization != Normalization::one_over_n &&
        ensemble.normalization != Normalization::one_over_sqrt_mn) {
      fail_config(*this, "requires the 1/n sample-covariance scaling");
    }
  };
  const auto require_wigner_scaling = [&]() {
    require_family(Family::wigner, "requires a Wigner ensemble");
    if (ensemble.normalization != Normalization::one_over_sqrt_n) {
      fail_config(*this, "requires the 1/sqrt(n) Wigner scaling");
    }
  };
  const auto require_additive_spikes = [&]() {
    const PerturbationSpec& p = need_perturbation();
    if (p.mode != PerturbationSpec::Mode::additive) {
      fail_config(*this, "perturbation must be additive");
    }
    require_spike_gap(*this, spike_eigenvalues(p, n), param("delta", 0.4));
  };

  switch (experiment) {
    case ExperimentKind::nonreal_wigner: {
      require_family(Family::wigner, "requires a Wigner ensemble");
      const PerturbationSpec& p = need_perturbation();
      if (p.kind != PerturbationSpec::Kind::diagonal ||
          p.mode != PerturbationSpec::Mode::additive) {
        fail_config(*this, "perturbation must be an additive diagonal");
      }
      std::size_t nonzero = 0;
      cplx v(0.0, 0.0);
      for (const cplx& x : p.values) {
        if (x != cplx(0.0, 0.0)) {
          ++nonzero;
          v = x;
        }
      }
      if (nonzero != 1 || v.real() != 0.0 || v.imag() == 0.0) {
        fail_config(*this,
                    "perturbation must have exactly one nonzero diagonal "
                    "value, purely imaginary");
      }
      break;
    }
    case ExperimentKind::nonreal_sampcov: {
      require_family(Family::sample_covariance,
                     "requires a sample-covariance ensemble");
      if (!atom_is_continuous(ensemble.entry)) {
        fail_config(*this, "requires an absolutely continuous entry atom");
      }
      const PerturbationSpec& p = need_perturbation();
      if (p.kind != PerturbationSpec::Kind::rank_one ||
          p.mode != PerturbationSpec::Mode::multiplicative) {
        fail_config(*this, "perturbation must be multiplicative rank-one");
      }
      if (p.theta.real() != 0.0 || p.theta.imag() == 0.0) {
        fail_config(*this, "rank-one strength must be purely imaginary");
      }
      if (p.left != p.right || !is_standard_basis_vector(p.left)) {
        fail_config(*this,
                    "rank-one factors must be one shared standard basis "
                    "vector");
      }
      if (p.left.size() != n) {
        fail_config(*this, "rank-one factor length must equal n");
      }
      break;
    }
    case ExperimentKind::nonreal_deterministic: {
      require_family(Family::wigner, "requires a Hermitian (Wigner) source");
      const double k = param("k", 1.0);
      if (k < 1.0 || k != std::floor(k) ||
          static_cast<std::size_t>(k) > n) {
        fail_config(*this, "k must be an integer in [1, n]");
      }
      if (param("gamma", 1.0) == 0.0) {
        fail_config(*this, "gamma must be nonzero");
      }
      break;
    }
    case ExperimentKind::interlacing: {
      require_family(Family::wigner, "requires a Wigner ensemble");
      if (n < 2) fail_config(*this, "needs n >= 2");
      if (!atom_is_continuous(ensemble.offdiag) ||
          !atom_is_continuous(ensemble.diag)) {
        fail_config(*this, "requires absolutely continuous atoms");
      }
      break;
    }
    case ExperimentKind::global_law_wigner: {
      require_wigner_scaling();
      if (perturbation) {
        perturbation->validate();
        if (perturbation->mode != PerturbationSpec::Mode::additive) {
          fail_config(*this, "perturbation must be additive");
        }
      }
      break;
    }
    case ExperimentKind::global_law_mp: {
      require_family(Family::sample_covariance,
                     "requires a sample-covariance ensemble");
      if (ensemble.normalization != Normalization::one_over_sqrt_mn &&
          !(ensemble.m == ensemble.n &&
            ensemble.normalization == Normalization::one_over_n)) {
        fail_config(*this, "requires the 1/sqrt(mn) scaling");
      }
      if (perturbation) {
        perturbation->validate();
        if (perturbation->mode != PerturbationSpec::Mode::multiplicative) {
          fail_config(*this, "perturbation must be multiplicative");
        }
      }
      break;
    }
    case ExperimentKind::outliers_wigner:
    case ExperimentKind::critical_points: {
      require_wigner_scaling();
      require_additive_spikes();
      break;
    }
    case ExperimentKind::outliers_mp: {
      require_mp_scaling();
      const PerturbationSpec& p = need_perturbation();
      if (p.mode != PerturbationSpec::Mode::multiplicative) {
        fail_config(*this, "perturbation must be multiplicative");
      }
      require_spike_gap(*this, spike_eigenvalues(p, n), param("delta", 0.4));
      break;
    }
    case ExperimentKind::bulk_im_bound: {
      if (ensemble.family == Family::wigner) {
        require_wigner_scaling();
        require_additive_spikes();
      } else {
        require_mp_scaling();
        const PerturbationSpec& p = need_perturbation();
        if (p.mode != PerturbationSpec::Mode::multiplicative) {
          fail_config(*this, "perturbation must be multiplicative");
        }
        require_spike_gap(*this, spike_eigenvalues(p, n),
                          param("delta", 0.4));
      }
      break;
    }
    case ExperimentKind::overlap_wigner:
    case ExperimentKind::overlap_mp: {
      if (experiment == ExperimentKind::overlap_wigner) {
        require_wigner_scaling();
      } else {
        require_mp_scaling();
      }
      const cplx theta(param("theta_re", 2.0), param("theta_im", 0.0));
      if (std::abs(theta) <= 1.0) {
        fail_config(*this, "needs |theta| > 1");
      }
      break;
    }
    case ExperimentKind::bounds_suite: {
      if (n < 2) fail_config(*this, "needs n >= 2");
      break;
    }
  }
}

// ---------------------------------------------------------------------------
// Runners.

ExperimentReport run_nonreal_wigner(const ExperimentSpec& spec,
                                    std::uint64_t master_seed) {
  require_kind(spec, ExperimentKind::nonreal_wigner);
  spec.validate();
  const std::size_t n = spec.ensemble.n;
  const ComplexMatrix p = build(*spec.perturbation, n);
  const double sign = signum(single_diagonal_value(*spec.perturbation).imag());

  const auto body = [&](std::size_t, const SeedPlan& plan) {
    TrialOutput out;
    Xoshiro256pp rng(plan);
    ComplexMatrix a = sample_wigner(spec.ensemble, rng);
    a += p;
    const Spectrum s = eig_general(a);
    double min_signed = kInf;
    for (const cplx& ev : s.eigenvalues) {
      min_signed = std::min(min_signed, sign * ev.imag());
    }
    out.record.pass = min_signed > 0.0;
    out.record.metrics["min_signed_imag"] = min_signed;
    out.record.metrics["trace_imag_gap"] = trace_imag_gap(s.eigenvalues, a);
    push_values(out.rows, s.eigenvalues, DumpKind::eigenvalue);
    return out;
  };
  return assemble(spec.experiment, run_trials(spec.trials, master_seed, body),
                  true);
}

ExperimentReport run_nonreal_sampcov(const ExperimentSpec& spec,
                                     std::uint64_t master_seed) {
  require_kind(spec, ExperimentKind::nonreal_sampcov);
  spec.validate();
  const std::size_t n = spec.ensemble.n;
  const std::size_t r = std::min(spec.ensemble.m, spec.ensemble.n);
  const double sign = signum(spec.perturbation->theta.imag());
  const double zero_scale = spec.param("zero_tol_scale", 1e-8);

  const auto body = [&](std::size_t, const SeedPlan& plan) {
    TrialOutput out;
    Xoshiro256pp rng(plan);
    const ComplexMatrix s = sample_covariance(spec.ensemble, rng);
    const ComplexMatrix a = apply(s, *spec.perturbation);
    const Spectrum spectrum = eig_general(a);
    const double zero_tol = zero_scale * spectral_norm(s);
    std::size_t moved = 0;
    std::size_t zeros = 0;
    double min_pos_imag = kInf;
    double zero_max_abs = 0.0;
    for (const cplx& ev : spectrum.eigenvalues) {
      if (std::abs(ev) <= zero_tol) {
        ++zeros;
        zero_max_abs = std::max(zero_max_abs, std::abs(ev));
      } else if (sign * ev.imag() > 0.0) {
        ++moved;
        min_pos_imag = std::min(min_pos_imag, sign * ev.imag());
      }
    }
    out.record.pass = moved == r && zeros == n - r;
    out.record.metrics["nonreal_count"] = static_cast<double>(moved);
    out.record.metrics["zero_count"] = static_cast<double>(zeros);
    out.record.metrics["min_pos_imag"] = moved > 0 ? min_pos_imag : 0.0;
    out.record.metrics["zero_max_abs"] = zero_max_abs;
    out.record.metrics["zero_tol"] = zero_tol;
    out.record.metrics["trace_imag_gap"] =
        trace_imag_gap(spectrum.eigenvalues, a);
    push_values(out.rows, spectrum.eigenvalues, DumpKind::eigenvalue);
    return out;
  };
  return assemble(spec.experiment, run_trials(spec.trials, master_seed, body),
                  true);
}

ExperimentReport run_nonreal_deterministic(const ExperimentSpec& spec,
                                           std::uint64_t master_seed) {
  require_kind(spec, ExperimentKind::nonreal_deterministic);
  spec.validate();
  const std::size_t n = spec.ensemble.n;
  const std::size_t k = static_cast<std::size_t>(spec.param("k", 1.0));
  const double gamma = spec.param("gamma", 1.0);
  const double sign = signum(gamma);
  const std::vector<cplx> z(k, cplx(1.0, 0.0));
  const std::vector<double> weights(k, gamma);

  // Counts eigenvalues pushed off the axis and matches the rest against the
  // expected shared spectrum; returns {count, worst matched distance}.
  const auto split_and_match = [&](const std::vector<cplx>& spectrum,
                                   const std::vector<cplx>& shared,
                                   double scale) {
    std::size_t moved = 0;
    std::vector<cplx> rest;
    for (const cplx& ev : spectrum) {
      if (sign * ev.imag() > 1e-8 * scale) {
        ++moved;
      } else {
        rest.push_back(ev);
      }
    }
    const double err = max_match_distance(rest, shared);
    return std::pair<std::size_t, double>(moved, err);
  };

  const auto body = [&](std::size_t, const SeedPlan& plan) {
    TrialOutput out;
    Xoshiro256pp rng(plan);
    const ComplexMatrix m = sample_wigner(spec.ensemble, rng);
    const NonrealVectors nv = construct_nonreal_vector(m, k, z, weights);
    double scale = 1.0;
    double lam_min = kInf;
    for (const cplx& ev : nv.selected) {
      scale = std::max(scale, std::abs(ev));
      lam_min = std::min(lam_min, ev.real());
    }
    for (const cplx& ev : nv.unselected) {
      scale = std::max(scale, std::abs(ev));
      lam_min = std::min(lam_min, ev.real());
    }

    // Additive form M + i u v^*: exactly k eigenvalues leave the axis, the
    // unselected ones survive exactly.
    ComplexMatrix p1 = outer(nv.u, nv.v);
    p1 *= cplx(0.0, 1.0);
    const ComplexMatrix a1 = m + p1;
    const Spectrum s1 = eig_general(a1);
    const auto [moved1, err1] =
        split_and_match(s1.eigenvalues, nv.unselected, scale);
    const bool additive_ok = moved1 == k && err1 <= 1e-7 * scale;

    // Multiplicative form on a positive shift of M (same eigenvectors): the
    // selected eigenvalues must be positive for M(I + i gamma v v^*), so
    // shift the whole spectrum above 1 when needed.
    const double c = lam_min <= 0.0 ? 1.0 - lam_min : 0.0;
    ComplexMatrix m2 = m;
    for (std::size_t i = 0; i < n; ++i) m2(i, i) += c;
    const std::vector<cplx> mv = mat_vec(m2, nv.v);
    ComplexMatrix p2 = outer(mv, nv.v);
    p2 *= cplx(0.0, gamma);
    const ComplexMatrix a2 = m2 + p2;
    const Spectrum s2 = eig_general(a2);
    std::vector<cplx> shifted = nv.unselected;
    for (cplx& ev : shifted) ev += c;
    const double scale2 = scale + c;
    const auto [moved2, err2] =
        split_and_match(s2.eigenvalues, shifted, scale2);
    const bool mult_ok = moved2 == k && err2 <= 1e-7 * scale2;

    out.record.pass = additive_ok && mult_ok;
    out.record.metrics["additive_offaxis"] = static_cast<double>(moved1);
    out.record.metrics["additive_match_err"] = err1;
    out.record.metrics["mult_offaxis"] = static_cast<double>(moved2);
    out.record.metrics["mult_match_err"] = err2;
    out.record.metrics["shift"] = c;
    push_values(out.rows, s1.eigenvalues, DumpKind::eigenvalue);
    return out;
  };
  return assemble(spec.experiment, run_trials(spec.trials, master_seed, body),
                  true);
}

ExperimentReport run_interlacing(const ExperimentSpec& spec,
                                 std::uint64_t master_seed) {
  require_kind(spec, ExperimentKind::interlacing);
  spec.validate();
  const std::size_t hb_degree =
      std::max<std::size_t>(2, static_cast<std::size_t>(
                                   spec.param("hb_degree", 6.0)));

  const auto body = [&](std::size_t, const SeedPlan& plan) {
    TrialOutput out;
    Xoshiro256pp rng(plan);
    const ComplexMatrix w = sample_wigner(spec.ensemble, rng);
    const Spectrum full = eig_hermitian(w);
    const Spectrum minor = eig_hermitian(leading_minor(w));
    // Both spectra arrive in descending order.
    double margin = kInf;
    for (std::size_t i = 0; i + 1 < full.eigenvalues.size(); ++i) {
      const double lam_i = full.eigenvalues[i].real();
      const double lam_next = full.eigenvalues[i + 1].real();
      const double mu_i = minor.eigenvalues[i].real();
      margin = std::min(margin, std::min(lam_i - mu_i, mu_i - lam_next));
    }
    const bool interlaced = margin > 0.0;

    // Half-plane criterion on a synthetic strictly interlacing pair and a
    // deliberately broken one.
    std::vector<double> outer_roots(hb_degree);
    for (double& x : outer_roots) x = rng.uniform(-2.0, 2.0);
    std::sort(outer_roots.begin(), outer_roots.end(),
              std::greater<double>());
    std::vector<double> inner_roots(hb_degree - 1);
    for (std::size_t i = 0; i + 1 < hb_degree; ++i) {
      inner_roots[i] = outer_roots[i + 1] +
                       (outer_roots[i] - outer_roots[i + 1]) *
                           rng.uniform(0.05, 0.95);
    }
    const auto real_poly = [](const std::vector<double>& roots) {
      std::vector<cplx> r(roots.begin(), roots.end());
      return Polynomial::from_roots(r);
    };
    const Polynomial p = real_poly(outer_roots);
    const bool hb_pos = roots_in_one_half_plane(
        poly_roots(Polynomial::combine_imag(p, real_poly(inner_roots))));
    std::vector<double> broken = inner_roots;
    broken[0] = outer_roots[0] + 1.0;  // now strictly outside: no interlacing
    const bool hb_neg = !roots_in_one_half_plane(
        poly_roots(Polynomial::combine_imag(p, real_poly(broken))));

    out.record.pass = interlaced && hb_pos && hb_neg;
    out.record.metrics["margin"] = margin;
    out.record.metrics["half_plane_on_interlacing"] = hb_pos ? 1.0 : 0.0;
    out.record.metrics["mixed_on_broken"] = hb_neg ? 1.0 : 0.0;
    return out;
  };
  return assemble(spec.experiment, run_trials(spec.trials, master_seed, body),
                  false);
}

ExperimentReport run_global_law(const ExperimentSpec& spec, LawKind law,
                                std::uint64_t master_seed) {
  require_kind(spec, law == LawKind::semicircle
                         ? ExperimentKind::global_law_wigner
                         : ExperimentKind::global_law_mp);
  spec.validate();
  const std::size_t n = spec.ensemble.n;
  const double ks_tol = spec.param("ks_tol", 0.05);
  const double tol_weak = spec.param("tol_weak", 0.05);
  const std::size_t rank =
      spec.perturbation ? spec.perturbation->declared_rank() : 0;
  const double mass_tol = static_cast<double>(rank) / static_cast<double>(n) +
                          spec.param("mass_tol_extra", 0.01);
  const double hs_ratio =
      spec.perturbation
          ? frobenius_norm(build(*spec.perturbation, n)) / std::sqrt(n)
          : 0.0;
  const double y = spec.ensemble.family == Family::sample_covariance
                       ? static_cast<double>(spec.ensemble.m) /
                             static_cast<double>(spec.ensemble.n)
                       : 1.0;

  const auto body = [&](std::size_t, const SeedPlan& plan) {
    TrialOutput out;
    Xoshiro256pp rng(plan);
    const ComplexMatrix m = sample_matrix(spec.ensemble, rng);
    const ComplexMatrix a =
        spec.perturbation ? apply(m, *spec.perturbation) : m;
    const Spectrum s = eig_general(a);
    // A rank-deficient sample covariance (m < n) has exact structural zeros
    // that the solver reports as +-1e-16 noise; test them against the law's
    // point mass separately and feed only the nonzero part to the
    // continuous-law Kolmogorov statistic.
    const bool split_zeros =
        law == LawKind::marchenko_pastur && y < 1.0;
    double top = 1.0;
    for (const cplx& ev : s.eigenvalues) top = std::max(top, std::abs(ev));
    const double zero_tol = split_zeros ? 1e-8 * top : 0.0;
    std::vector<double> reals;
    reals.reserve(n);
    std::size_t nonreal = 0;
    std::size_t zeros = 0;
    for (const cplx& ev : s.eigenvalues) {
      if (split_zeros && std::abs(ev) <= zero_tol) {
        ++zeros;
      } else {
        reals.push_back(ev.real());
      }
      if (std::abs(ev.imag()) > tol_weak) ++nonreal;
    }
    std::function<double(double)> cdf;
    if (law == LawKind::semicircle) {
      cdf = [](double x) { return semicircle_cdf(x); };
    } else if (y == 1.0) {
      cdf = [](double x) { return mp_cdf(x); };
    } else {
      cdf = make_mp_cdf(y, split_zeros);
    }
    const double ks = kolmogorov_distance(reals, cdf);
    const double mass =
        static_cast<double>(nonreal) / static_cast<double>(n);
    const double zero_gap =
        split_zeros ? std::abs(static_cast<double>(zeros) /
                                   static_cast<double>(n) -
                               (1.0 - y))
                    : 0.0;
    out.record.pass = ks <= ks_tol && mass <= mass_tol &&
                      zero_gap <= mass_tol;
    out.record.metrics["ks_distance"] = ks;
    out.record.metrics["nonreal_mass"] = mass;
    out.record.metrics["hs_ratio"] = hs_ratio;
    out.record.metrics["trace_imag_gap"] = trace_imag_gap(s.eigenvalues, a);
    if (split_zeros) out.record.metrics["zero_mass_gap"] = zero_gap;
    push_values(out.rows, s.eigenvalues, DumpKind::eigenvalue);
    return out;
  };
  return assemble(spec.experiment, run_trials(spec.trials, master_seed, body),
                  true);
}

ExperimentReport run_outliers(const ExperimentSpec& spec, LawKind law,
                              std::uint64_t master_seed) {
  require_kind(spec, law == LawKind::semicircle
                         ? ExperimentKind::outliers_wigner
                         : ExperimentKind::outliers_mp);
  spec.validate();
  const std::size_t n = spec.ensemble.n;
  const double delta = spec.param("delta", 0.4);
  const double tolerance =
      spec.param("tolerance", law == LawKind::semicircle ? 0.1 : 0.2);
  const std::vector<cplx> predictions =
      outlier_predictions(spike_eigenvalues(*spec.perturbation, n), law,
                          delta);

  const auto body = [&](std::size_t, const SeedPlan& plan) {
    TrialOutput out;
    Xoshiro256pp rng(plan);
    const ComplexMatrix m = sample_matrix(spec.ensemble, rng);
    const ComplexMatrix a = apply(m, *spec.perturbation);
    const Spectrum s = eig_general(a);
    OutlierClassification cls =
        classify_outliers(s.eigenvalues, law, delta);
    const double err = max_match_distance(cls.outliers, predictions);
    out.record.pass =
        cls.outliers.size() == predictions.size() && err <= tolerance;
    out.record.metrics["outlier_count"] =
        static_cast<double>(cls.outliers.size());
    out.record.metrics["max_match_err"] =
        cls.outliers.size() == predictions.size() ? err : kInf;
    out.record.metrics["trace_imag_gap"] = trace_imag_gap(s.eigenvalues, a);
    push_values(out.rows, s.eigenvalues, DumpKind::eigenvalue);
    push_values(out.rows, predictions, DumpKind::prediction);
    out.classification = std::move(cls);
    return out;
  };
  return assemble(spec.experiment, run_trials(spec.trials, master_seed, body),
                  true);
}

ExperimentReport run_bulk_im_bound(const ExperimentSpec& spec,
                                   std::uint64_t master_seed) {
  require_kind(spec, ExperimentKind::bulk_im_bound);
  spec.validate();
  const LawKind law = law_of_family(spec.ensemble.family);
  const std::size_t n = spec.ensemble.n;
  const double delta = spec.param("delta", 0.4);
  const double epsilon = spec.param("epsilon", 0.2);
  const double im_bound = std::pow(static_cast<double>(n), -1.0 + epsilon);
  const double edge_slack =
      std::pow(static_cast<double>(n), -2.0 / 3.0 + epsilon);
  const std::size_t expected =
      outlier_predictions(spike_eigenvalues(*spec.perturbation, n), law,
                          delta)
          .size();
  const double dprime = delta_prime(delta);

  const auto body = [&](std::size_t, const SeedPlan& plan) {
    TrialOutput out;
    Xoshiro256pp rng(plan);
    const ComplexMatrix m = sample_matrix(spec.ensemble, rng);
    const ComplexMatrix a = apply(m, *spec.perturbation);
    const Spectrum s = eig_general(a);
    OutlierClassification cls =
        classify_outliers(s.eigenvalues, law, delta);
    bool ok = cls.outliers.size() == expected;
    double max_im = 0.0;
    if (law == LawKind::semicircle) {
      double max_re = 0.0;
      for (const cplx& ev : cls.bulk) {
        max_im = std::max(max_im, std::abs(ev.imag()));
        max_re = std::max(max_re, std::abs(ev.real()));
      }
      ok = ok && max_im <= im_bound && max_re <= 2.0 + edge_slack;
      out.record.metrics["max_bulk_abs_re"] = max_re;
    } else {
      // Bulk eigenvalues either sit in the small disk at the origin or obey
      // the strip bounds with strictly positive real part.
      double min_re = kInf;
      double max_re = 0.0;
      for (const cplx& ev : cls.bulk) {
        if (std::abs(ev) <= dprime) continue;
        max_im = std::max(max_im, std::abs(ev.imag()));
        min_re = std::min(min_re, ev.real());
        max_re = std::max(max_re, ev.real());
        if (std::abs(ev.imag()) > im_bound || ev.real() <= 0.0 ||
            ev.real() > 4.0 + edge_slack) {
          ok = false;
        }
      }
      out.record.metrics["min_bulk_re"] = min_re == kInf ? 0.0 : min_re;
      out.record.metrics["max_bulk_re"] = max_re;
    }
    out.record.pass = ok;
    out.record.metrics["max_bulk_abs_im"] = max_im;
    out.record.metrics["outlier_count"] =
        static_cast<double>(cls.outliers.size());
    push_values(out.rows, s.eigenvalues, DumpKind::eigenvalue);
    out.classification = std::move(cls);
    return out;
  };
  return assemble(spec.experiment, run_trials(spec.trials, master_seed, body),
                  true);
}

ExperimentReport run_overlap(const ExperimentSpec& spec, LawKind law,
                             std::uint64_t master_seed) {
  require_kind(spec, law == LawKind::semicircle
                         ? ExperimentKind::overlap_wigner
                         : ExperimentKind::overlap_mp);
  spec.validate();
  const std::size_t n = spec.ensemble.n;
  const cplx theta(spec.param("theta_re", 2.0), spec.param("theta_im", 0.0));
  const Field field = spec.param("complex_field", 0.0) != 0.0
                          ? Field::complex_field
                          : Field::real;
  const double delta = spec.param("delta", 0.5);
  const double tolerance = spec.param("tolerance", 0.1);
  const cplx predicted_location = law == LawKind::semicircle
                                      ? outlier_wigner(theta)->value
                                      : outlier_mp(theta)->value;
  const double predicted_overlap =
      (law == LawKind::semicircle ? overlap_wigner(theta) : overlap_mp(theta))
          .value.real();

  const auto body = [&](std::size_t, const SeedPlan& plan) {
    TrialOutput out;
    Xoshiro256pp rng(plan);
    const ComplexMatrix m = sample_matrix(spec.ensemble, rng);
    const std::vector<cplx> u = sample_unit_sphere(n, field, rng);
    // theta u u^* applied additively (Wigner) or multiplicatively (sample
    // covariance), using M (theta u u^*) = theta (M u) u^*.
    ComplexMatrix a = m;
    const std::vector<cplx> lead =
        law == LawKind::semicircle ? u : mat_vec(m, u);
    for (std::size_t i = 0; i < n; ++i) {
      cplx* row = a.row(i);
      const cplx scaled = theta * lead[i];
      for (std::size_t j = 0; j < n; ++j) {
        row[j] += scaled * std::conj(u[j]);
      }
    }
    const Spectrum s = eig_general(a);
    OutlierClassification cls =
        classify_outliers(s.eigenvalues, law, delta);
    bool ok = cls.outliers.size() == 1;
    double location_err = kInf;
    double overlap = 0.0;
    double vec_residual = 0.0;
    if (ok) {
      location_err = std::abs(cls.outliers[0] - predicted_location);
      ok = location_err <= tolerance;
    }
    if (ok) {
      try {
        const EigenPair pair = eigenvector_for(a, cls.outliers[0]);
        overlap = std::norm(dot(u, pair.eigenvector));
        vec_residual = pair.residual;
      } catch (const solver_error&) {
        ok = false;
      }
    }
    out.record.pass = ok;
    out.record.metrics["overlap"] = overlap;
    out.record.metrics["overlap_prediction"] = predicted_overlap;
    out.record.metrics["overlap_abs_err"] =
        std::abs(overlap - predicted_overlap);
    out.record.metrics["outlier_count"] =
        static_cast<double>(cls.outliers.size());
    out.record.metrics["location_err"] = location_err;
    out.record.metrics["eigvec_residual"] = vec_residual;
    push_values(out.rows, s.eigenvalues, DumpKind::eigenvalue);
    out.rows.push_back(DumpRow{0, 0, predicted_location, DumpKind::prediction});
    out.classification = std::move(cls);
    return out;
  };
  return assemble(spec.experiment, run_trials(spec.trials, master_seed, body),
                  true);
}

ExperimentReport run_critical_points(const ExperimentSpec& spec,
                                     std::uint64_t master_seed) {
  require_kind(spec, ExperimentKind::critical_points);
  spec.validate();
  const std::size_t n = spec.ensemble.n;
  const double delta = spec.param("delta", 0.4);
  const double ks_tol = spec.param("ks_tol", 0.05);
  const double im_tol = spec.param("im_tol", 0.05);
  const double cp_tol = spec.param("cp_match_tol", 0.5);
  const std::vector<cplx> predictions = outlier_predictions(
      spike_eigenvalues(*spec.perturbation, n), LawKind::semicircle, delta);

  const auto body = [&](std::size_t, const SeedPlan& plan) {
    TrialOutput out;
    Xoshiro256pp rng(plan);
    const ComplexMatrix m = sample_matrix(spec.ensemble, rng);
    const ComplexMatrix a = apply(m, *spec.perturbation);
    const Spectrum s = eig_general(a);
    const std::vector<cplx> cps = critical_points(s.eigenvalues);
    OutlierClassification eig_cls =
        classify_outliers(s.eigenvalues, LawKind::semicircle, delta);
    const OutlierClassification cp_cls =
        classify_outliers(cps, LawKind::semicircle, delta);

    std::vector<double> reals;
    reals.reserve(cps.size());
    for (const cplx& cp : cps) reals.push_back(cp.real());
    const double ks = kolmogorov_distance(
        reals, [](double x) { return semicircle_cdf(x); });

    double max_bulk_im = 0.0;
    for (const cplx& cp : cp_cls.bulk) {
      max_bulk_im = std::max(max_bulk_im, std::abs(cp.imag()));
    }

    // Every escaped critical point must shadow an outlier eigenvalue.
    double worst_shadow = 0.0;
    for (const cplx& cp : cp_cls.outliers) {
      double nearest = kInf;
      for (const cplx& ev : eig_cls.outliers) {
        nearest = std::min(nearest, std::abs(cp - ev));
      }
      worst_shadow = std::max(worst_shadow, nearest);
    }

    out.record.pass =
        ks <= ks_tol && max_bulk_im <= im_tol && worst_shadow <= cp_tol;
    out.record.metrics["ks_distance"] = ks;
    out.record.metrics["max_bulk_cp_im"] = max_bulk_im;
    out.record.metrics["max_cp_shadow_dist"] = worst_shadow;
    out.record.metrics["cp_outlier_count"] =
        static_cast<double>(cp_cls.outliers.size());
    out.record.metrics["eig_outlier_count"] =
        static_cast<double>(eig_cls.outliers.size());
    push_values(out.rows, s.eigenvalues, DumpKind::eigenvalue);
    push_values(out.rows, cps, DumpKind::critical_point);
    push_values(out.rows, predictions, DumpKind::circle_center);
    out.classification = std::move(eig_cls);
    return out;
  };
  return assemble(spec.experiment, run_trials(spec.trials, master_seed, body),
                  true);
}

ExperimentReport run_bounds_suite(const ExperimentSpec& spec,
                                  std::uint64_t master_seed) {
  require_kind(spec, ExperimentKind::bounds_suite);
  spec.validate();
  const std::size_t n_max = spec.ensemble.n;
  const double pscale = spec.param("perturbation_scale", 0.5);

  const auto body = [&](std::size_t, const SeedPlan& plan) {
    TrialOutput out;
    Xoshiro256pp rng(plan);
    const std::size_t n = 2 + static_cast<std::size_t>(
                                  rng.next_u64() % (n_max - 1));
    const double scale = 1.0 / std::sqrt(2.0 * static_cast<double>(n));

    // Random complex Hermitian base.
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      m(i, i) = cplx(rng.gaussian() * std::sqrt(2.0) * scale, 0.0);
      for (std::size_t j = i + 1; j < n; ++j) {
        const auto [re, im] = rng.gaussian_pair();
        m(i, j) = cplx(re * scale, im * scale);
        m(j, i) = std::conj(m(i, j));
      }
    }
    // Random dense perturbation.
    ComplexMatrix p(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const auto [re, im] = rng.gaussian_pair();
        p(i, j) = cplx(re, im) * (pscale * scale);
      }
    }
    const KahanReports kahan = kahan_check(m, p);
    const BoundReport hw = hoffman_wielandt_check(m, re_im_parts(p).first);

    // Random normal base for the optimal-matching bound.
    ComplexMatrix basis(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const auto [re, im] = rng.gaussian_pair();
        basis(i, j) = cplx(re, im);
      }
    }
    orthonormalize_columns(basis);
    std::vector<cplx> diag(n);
    for (cplx& d : diag) {
      const auto [re, im] = rng.gaussian_pair();
      d = cplx(re, im);
    }
    const ComplexMatrix normal =
        basis * ComplexMatrix::diagonal(diag) * basis.conj_transpose();
    const BoundReport sun = sun_check(normal, p);

    out.record.pass = kahan.sup_imag.satisfied &&
                      kahan.sum_imag_sq.satisfied &&
                      kahan.paired_displacement.satisfied && hw.satisfied &&
                      sun.satisfied;
    out.record.metrics["n"] = static_cast<double>(n);
    out.record.metrics["kahan_sup_slack"] = kahan.sup_imag.slack;
    out.record.metrics["kahan_sum_slack"] = kahan.sum_imag_sq.slack;
    out.record.metrics["kahan_pair_slack"] =
        kahan.paired_displacement.slack;
    out.record.metrics["hw_slack"] = hw.slack;
    out.record.metrics["sun_slack"] = sun.slack;
    return out;
  };
  return assemble(spec.experiment, run_trials(spec.trials, master_seed, body),
                  false);
}

ExperimentReport run_experiment(const ExperimentSpec& spec,
                                std::uint64_t master_seed) {
  switch (spec.experiment) {
    case ExperimentKind::nonreal_wigner:
      return run_nonreal_wigner(spec, master_seed);
    case ExperimentKind::nonreal_sampcov:
      return run_nonreal_sampcov(spec, master_seed);
    case ExperimentKind::nonreal_deterministic:
      return run_nonreal_deterministic(spec, master_seed);
    case ExperimentKind::interlacing:
      return run_interlacing(spec, master_seed);
    case ExperimentKind::global_law_wigner:
      return run_global_law(spec, LawKind::semicircle, master_seed);
    case ExperimentKind::global_law_mp:
      return run_global_law(spec, LawKind::marchenko_pastur, master_seed);
    case ExperimentKind::outliers_wigner:
      return run_outliers(spec, LawKind::semicircle, master_seed);
    case ExperimentKind::outliers_mp:
      return run_outliers(spec, LawKind::marchenko_pastur, master_seed);
    case ExperimentKind::bulk_im_bound:
      return run_bulk_im_bound(spec, master_seed);
    case ExperimentKind::overlap_wigner:
      return run_overlap(spec, LawKind::semicircle, master_seed);
    case ExperimentKind::overlap_mp:
      return run_overlap(spec, LawKind::marchenko_pastur, master_seed);
    case ExperimentKind::critical_points:
      return run_critical_points(spec, master_seed);
    case ExperimentKind::bounds_suite:
      return run_bounds_suite(spec, master_seed);
  }
  throw config_error("unknown experiment kind");
}

}  // namespace nearherm
