#pragma once

#include <cstddef>
#include <vector>

#include "hrs/config.hpp"
#include "hrs/matrix.hpp"

namespace hrs {
namespace oracle {

// One reachable smoothing outcome (extended matrix) with its exact
// probability under the clean and the perturbed input.
struct OutcomeAtom {
  ExtendedMatrix z;
  double prob_clean = 0.0;
  double prob_perturbed = 0.0;
};

inline constexpr std::size_t kMaxOracleRows = 4;
inline constexpr std::size_t kMaxOracleCols = 3;

// Exhaustively enumerates every (values, indicator) outcome with positive
// probability under either input. Binary data with sparse-flip or ablation
// noise only, and at most kMaxOracleRows x kMaxOracleCols; anything larger
// or continuous throws. This is the independent ground truth the certified
// bounds are validated against.
std::vector<OutcomeAtom> enumerate_outcomes(const FeatureMatrix& x,
                                            const FeatureMatrix& x_tilde,
                                            const SmoothingConfig& config);

// Exact extremal perturbed-class probability over all classifiers whose
// clean-class probability is at least (lower) or at most (upper) the budget.
// Fractional greedy at atom granularity; optimal because atoms are the
// finest partition of the outcome space.
double exact_worst_case_lower(const std::vector<OutcomeAtom>& atoms, double budget);
double exact_worst_case_upper(const std::vector<OutcomeAtom>& atoms, double budget);

// Outcome mass grouped by which side can reach it: reachable_only_clean and
// reachable_only_perturbed carry the leakage mass delta, shared carries the
// rest, and the cross terms must be zero.
struct RegionMassReport {
  double only_clean_mass_clean = 0.0;      // expected: delta
  double only_clean_mass_perturbed = 0.0;  // expected: 0
  double shared_mass_clean = 0.0;          // expected: 1 - delta
  double shared_mass_perturbed = 0.0;      // expected: 1 - delta
  double only_pert_mass_clean = 0.0;       // expected: 0
  double only_pert_mass_perturbed = 0.0;   // expected: delta
};

RegionMassReport region_accounting(const std::vector<OutcomeAtom>& atoms,
                                   const FeatureMatrix& x, const FeatureMatrix& x_tilde);

// Worst-case perturbed mass for Gaussian noise computed geometrically: find
// the halfspace threshold whose clean mass equals p by bisecting the CDF
// (no quantile call), then measure the same halfspace after shifting the
// mean by distance. Independent cross-check of gaussian_lower_bound.
double gaussian_halfspace_check(double p, double distance, double sigma);

}  // namespace oracle
}  // namespace hrs
