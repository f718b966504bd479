#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "hrs/config.hpp"
#include "hrs/record.hpp"

namespace hrs {

// One likelihood-ratio region of the lower-level smoothing pair: the set of
// outcomes where clean density / perturbed density equals exp(log_ratio),
// carrying its probability mass under each distribution. All bookkeeping is
// in log space; +-infinity ratios are valid (one-sided support).
struct Region {
  double log_ratio = 0.0;
  double log_mass_clean = 0.0;
  double log_mass_perturbed = 0.0;
};

// Regions sorted by descending ratio with equal ratios merged. Construction
// validates that each side's masses sum to 1 within 1e-9 and drops regions
// that are massless under both distributions.
class RegionTable {
 public:
  explicit RegionTable(std::vector<Region> regions);

  const std::vector<Region>& regions() const { return regions_; }

 private:
  std::vector<Region> regions_;
};

struct DeltaValue {
  double delta = 0.0;
  std::size_t r_used = 0;
};

// Probability that at least one of r adversarial rows is selected for
// lower-level noising. Uniform: 1 - p^r. Non-uniform: worst case over row
// subsets, 1 - product of the r smallest probabilities.
DeltaValue delta_uniform(double p, std::size_t r);
DeltaValue delta_nonuniform(const std::vector<double>& ps, std::size_t r);
DeltaValue delta_for(const Selection& sel, std::size_t r);

// Ablation-smoothing analogue: keep k of n rows uniformly at random;
// the probability that any of r target rows is kept is 1 - C(n-r,k)/C(n,k).
double delta_keep_subset(std::size_t n_rows, std::size_t k_keep, std::size_t r);

// Plain Gaussian worst-case bounds on the perturbed-class probability when
// the clean probability is p and the perturbation has L2 norm epsilon.
double gaussian_lower_bound(double p, double epsilon, double sigma);
double gaussian_upper_bound(double p, double epsilon, double sigma);

// Hierarchical Gaussian bounds: transform the probability budget by delta,
// apply the lower-level bound, and scale back. delta >= 1 short-circuits to
// the trivial bounds (lower 0, upper 1).
double hier_gaussian_lower(double p, double epsilon, double sigma, double delta);
double hier_gaussian_upper(double p, double epsilon, double sigma, double delta);

// Largest certifiable L2 radius in binary mode; 0 when the certificate
// cannot hold at any radius, kUnboundedRadius when it holds at every radius.
double hier_gaussian_max_radius(double p, double sigma, double delta);

// Likelihood-ratio regions for independent per-cell flips restricted to the
// r_add cells the adversary turned on and the r_del cells it turned off.
RegionTable sparse_regions(std::size_t r_add, std::size_t r_del, double p_plus, double p_minus);

// Exact worst-case (resp. best-case) perturbed mass over classifiers whose
// clean mass is at least (resp. at most) the budget; fractional greedy over
// the region table, budgets clamped to [0, 1].
double discrete_lp_lower(const RegionTable& table, double budget);
double discrete_lp_upper(const RegionTable& table, double budget);

double hier_discrete_lower(double p, double delta, const RegionTable& table);
double hier_discrete_upper(double p, double delta, const RegionTable& table);

// Fully hidden rows admit arbitrary perturbations: bounds are p -+ delta.
double ablation_lower(double p, double delta);
double ablation_upper(double p, double delta);

struct BallCertificate {
  bool certified = false;
  std::optional<double> max_epsilon;  // Gaussian binary mode only
};

// Certifies one threat-model ball. Binary mode passes only the lower bound
// on the top class (test: bound > 1/2); multi-class mode also passes the
// upper bound on the runner-up (test: lower > upper). Dispatches on the
// lower-level noise; incompatible noise/threat pairings throw.
BallCertificate certify_ball(double p_lower, std::optional<double> p_upper_runner,
                             const SmoothingConfig& config, const ThreatModel& threat);

}  // namespace hrs
