#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hrs/certify.hpp"
#include "hrs/classifier.hpp"
#include "hrs/config.hpp"
#include "hrs/dataset.hpp"

namespace hrs {

// Hierarchical sweeps cover the full parameter space: selection probability
// crossed with every lower-level setting, plus an ablation arm. The two
// baselines are its exact special cases: LowerOnly pins p = 1, AblationOnly
// keeps the p grid and only the ablation arm.
enum class SweepMethod { Hierarchical, LowerOnly, AblationOnly };

std::string to_string(SweepMethod m);
SweepMethod sweep_method_from_string(const std::string& s);

enum class SweepSampling { Grid, UniformRandom };

// Parameter axis: explicit grid points; random sampling draws uniformly
// between the smallest and largest point.
struct SweepRange {
  std::vector<double> values;

  bool empty() const { return values.empty(); }
  double lo() const;
  double hi() const;
};

// One smoothing configuration drawn from the sweep space. Exactly one of
// sigma, (p_plus, p_minus), or ablation describes the lower level.
struct TrialParams {
  double p = 1.0;
  std::optional<double> sigma;
  std::optional<double> p_plus;
  std::optional<double> p_minus;
  bool ablation = false;
};

// Canonical text form of the parameters, independent of the sweep method, so
// that e.g. a LowerOnly trial and a Hierarchical trial at p = 1 with the same
// lower level serialize identically.
std::string canonical_params(const TrialParams& params);

// Per-trial RNG seed derived from the canonical parameters, not the trial
// index: trials with matching parameters consume identical sample draws even
// across methods, which makes the special-case reductions exact.
std::uint64_t trial_seed(std::uint64_t sweep_seed, const TrialParams& params);

struct SweepTrial {
  std::size_t trial_id = 0;
  SweepMethod method = SweepMethod::Hierarchical;
  TrialParams params;
};

struct SweepSpec {
  SweepMethod method = SweepMethod::Hierarchical;
  SweepSampling sampling = SweepSampling::Grid;
  std::size_t n_trials = 0;   // UniformRandom only
  std::uint64_t seed = 0;     // parameter draws and per-trial sample streams
  std::size_t repeats = 1;    // dataset evaluations averaged per trial
  SweepRange p_range;         // selection probability
  SweepRange sigma_range;     // Gaussian lower level (Real data)
  SweepRange p_plus_range;    // sparse flips (Binary data)
  SweepRange p_minus_range;
  std::vector<ThreatModel> threat_grid;
  CertifyParams certify;
};

struct ParetoPoint {
  std::size_t trial_id = 0;
  SweepMethod method = SweepMethod::Hierarchical;
  TrialParams params;
  double clean_accuracy = 0.0;
  double certified_accuracy = 0.0;  // at the last threat grid point
  bool dominated = false;
};

// Expands the spec into concrete trials for the given data domain: Gaussian
// lower levels for Real data, sparse flips for Binary.
std::vector<SweepTrial> enumerate_trials(const SweepSpec& spec, Domain domain);

SmoothingConfig config_for_trial(const TrialParams& params, Domain domain);

// Called once per finished trial, possibly out of order; serialized.
using TrialSink = std::function<void(const ParetoPoint&)>;

// Runs every trial not listed in `skip` and returns the finished points
// ordered by trial id. Certified accuracy is taken at the last threat grid
// point. spec.certify.workers parallelizes across trials (within one trial
// when only one runs).
std::vector<ParetoPoint> run_sweep(const BaseClassifier& classifier, const Dataset& ds,
                                   const SweepSpec& spec,
                                   const std::vector<std::size_t>& skip = {},
                                   const TrialSink& sink = nullptr);

// Sets the dominated flag on every point: dominated means some other point
// is at least as good in both accuracies and strictly better in one.
void mark_dominated(std::vector<ParetoPoint>& points);

// The non-dominated subset, ordered by clean accuracy descending (stable for
// ties). Duplicate coordinates do not dominate each other; both are kept.
std::vector<ParetoPoint> pareto_front(std::vector<ParetoPoint> points);

}  // namespace hrs
