#include "hrs/oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hrs/certificates.hpp"
#include "hrs/matrix.hpp"

namespace hrs {
namespace {

using oracle::enumerate_outcomes;
using oracle::exact_worst_case_lower;
using oracle::exact_worst_case_upper;
using oracle::gaussian_halfspace_check;
using oracle::OutcomeAtom;
using oracle::region_accounting;

// Single binary cell set to 1 that the adversary deletes, smoothed with
// selection p = 0.8 and flips (0.1 up, 0.4 down). Small enough that every
// atom probability is checkable by hand.
struct OneCellCase {
  FeatureMatrix x{1, 1, Domain::Binary, {1.0}};
  FeatureMatrix x_tilde{1, 1, Domain::Binary, {0.0}};
  SmoothingConfig config{UniformSelection{0.8}, SparseFlipNoise{0.1, 0.4}};
};

const OutcomeAtom* find_atom(const std::vector<OutcomeAtom>& atoms, double w,
                             std::uint8_t tau) {
  for (const auto& a : atoms) {
    if (a.z.at(0, 0) == w && a.z.indicator()[0] == tau) return &a;
  }
  return nullptr;
}

TEST(EnumerateOutcomes, OneCellAtomProbabilities) {
  const OneCellCase c;
  const auto atoms = enumerate_outcomes(c.x, c.x_tilde, c.config);
  ASSERT_EQ(atoms.size(), 4u);

  // Unselected row keeps its own value: each side reaches exactly one of the
  // two unselected atoms.
  const OutcomeAtom* one_kept = find_atom(atoms, 1.0, 0);
  ASSERT_NE(one_kept, nullptr);
  EXPECT_NEAR(one_kept->prob_clean, 0.2, 1e-15);
  EXPECT_EQ(one_kept->prob_perturbed, 0.0);

  const OutcomeAtom* zero_kept = find_atom(atoms, 0.0, 0);
  ASSERT_NE(zero_kept, nullptr);
  EXPECT_EQ(zero_kept->prob_clean, 0.0);
  EXPECT_NEAR(zero_kept->prob_perturbed, 0.2, 1e-15);

  // Selected row: 0.8 * flip probabilities.
  const OutcomeAtom* noised_zero = find_atom(atoms, 0.0, 1);
  ASSERT_NE(noised_zero, nullptr);
  EXPECT_NEAR(noised_zero->prob_clean, 0.32, 1e-15);
  EXPECT_NEAR(noised_zero->prob_perturbed, 0.72, 1e-15);

  const OutcomeAtom* noised_one = find_atom(atoms, 1.0, 1);
  ASSERT_NE(noised_one, nullptr);
  EXPECT_NEAR(noised_one->prob_clean, 0.48, 1e-15);
  EXPECT_NEAR(noised_one->prob_perturbed, 0.08, 1e-15);
}

TEST(EnumerateOutcomes, MassesSumToOneOnBothSides) {
  const OneCellCase c;
  const auto atoms = enumerate_outcomes(c.x, c.x_tilde, c.config);
  double sum_c = 0.0;
  double sum_p = 0.0;
  for (const auto& a : atoms) {
    sum_c += a.prob_clean;
    sum_p += a.prob_perturbed;
  }
  EXPECT_NEAR(sum_c, 1.0, 1e-12);
  EXPECT_NEAR(sum_p, 1.0, 1e-12);
}

TEST(ExactWorstCase, GreedyValuesByHand) {
  const OneCellCase c;
  const auto atoms = enumerate_outcomes(c.x, c.x_tilde, c.config);
  // Budget 0.9: spend 0.2 on the clean-only atom, 0.48 on ratio 6, and the
  // remaining 0.22 fractionally on ratio 4/9.
  EXPECT_NEAR(exact_worst_case_lower(atoms, 0.9), 0.575, 1e-12);
  // Budget 0.3 upper: the perturbed-only atom is free, the cheapest shared
  // atom fills the rest.
  EXPECT_NEAR(exact_worst_case_upper(atoms, 0.3), 0.875, 1e-12);
  // Budget 1 takes every atom with clean mass; the clean-massless atom and
  // its 0.2 of perturbed mass stay excluded.
  EXPECT_NEAR(exact_worst_case_lower(atoms, 1.0), 0.8, 1e-12);
  EXPECT_EQ(exact_worst_case_lower(atoms, 0.0), 0.0);
  EXPECT_NEAR(exact_worst_case_upper(atoms, 1.0), 1.0, 1e-12);
}

TEST(ExactWorstCase, MatchesCertifiedBoundsOnThisInstance) {
  const OneCellCase c;
  const auto atoms = enumerate_outcomes(c.x, c.x_tilde, c.config);
  const double delta = delta_uniform(0.8, 1).delta;
  const RegionTable table = sparse_regions(0, 1, 0.1, 0.4);
  for (double p : {0.25, 0.5, 0.7, 0.9, 0.97}) {
    EXPECT_NEAR(exact_worst_case_lower(atoms, p), hier_discrete_lower(p, delta, table), 1e-12);
    EXPECT_NEAR(exact_worst_case_upper(atoms, p), hier_discrete_upper(p, delta, table), 1e-12);
  }
}

TEST(RegionAccounting, SplitsMassByReachability) {
  const OneCellCase c;
  const auto atoms = enumerate_outcomes(c.x, c.x_tilde, c.config);
  const auto report = region_accounting(atoms, c.x, c.x_tilde);
  EXPECT_NEAR(report.only_clean_mass_clean, 0.2, 1e-15);
  EXPECT_EQ(report.only_clean_mass_perturbed, 0.0);
  EXPECT_NEAR(report.shared_mass_clean, 0.8, 1e-15);
  EXPECT_NEAR(report.shared_mass_perturbed, 0.8, 1e-15);
  EXPECT_EQ(report.only_pert_mass_clean, 0.0);
  EXPECT_NEAR(report.only_pert_mass_perturbed, 0.2, 1e-15);
}

TEST(EnumerateOutcomes, AblationMatchesShiftBounds) {
  const FeatureMatrix x(1, 1, Domain::Binary, {1.0});
  const FeatureMatrix xt(1, 1, Domain::Binary, {0.0});
  const SmoothingConfig config{UniformSelection{0.8}, AblationNoise{}};
  const auto atoms = enumerate_outcomes(x, xt, config);
  ASSERT_EQ(atoms.size(), 3u);  // kept-1, kept-0, and the shared hidden atom
  for (double p : {0.3, 0.6, 0.9}) {
    EXPECT_NEAR(exact_worst_case_lower(atoms, p), ablation_lower(p, 0.2), 1e-12);
    EXPECT_NEAR(exact_worst_case_upper(atoms, p), ablation_upper(p, 0.2), 1e-12);
  }
}

TEST(EnumerateOutcomes, PerRowSelectionWeightsTau) {
  const FeatureMatrix x(2, 1, Domain::Binary, {1.0, 0.0});
  const SmoothingConfig config{PerRowSelection{{1.0, 0.0}}, AblationNoise{}};
  const auto atoms = enumerate_outcomes(x, x, config);
  // Row 0 always selected, row 1 never: one reachable outcome.
  ASSERT_EQ(atoms.size(), 1u);
  EXPECT_EQ(atoms[0].z.indicator(), (std::vector<std::uint8_t>{1, 0}));
  EXPECT_EQ(atoms[0].z.at(0, 0), 0.0);
  EXPECT_EQ(atoms[0].z.at(1, 0), 0.0);
  EXPECT_NEAR(atoms[0].prob_clean, 1.0, 1e-15);
}

TEST(EnumerateOutcomes, RejectsUnsupportedInstances) {
  const FeatureMatrix big(5, 1, Domain::Binary, std::vector<double>(5, 0.0));
  const FeatureMatrix wide(1, 4, Domain::Binary, std::vector<double>(4, 0.0));
  const FeatureMatrix real(1, 1, Domain::Real, {0.5});
  const FeatureMatrix ok(1, 1, Domain::Binary, {0.0});
  const FeatureMatrix other(2, 1, Domain::Binary, {0.0, 0.0});
  const SmoothingConfig flips{UniformSelection{0.8}, SparseFlipNoise{0.1, 0.4}};
  EXPECT_THROW(enumerate_outcomes(big, big, flips), std::invalid_argument);
  EXPECT_THROW(enumerate_outcomes(wide, wide, flips), std::invalid_argument);
  EXPECT_THROW(enumerate_outcomes(real, real, flips), std::invalid_argument);
  EXPECT_THROW(enumerate_outcomes(ok, other, flips), std::invalid_argument);
  const SmoothingConfig gauss{UniformSelection{0.8}, GaussianNoise{1.0}};
  EXPECT_THROW(enumerate_outcomes(ok, ok, gauss), std::invalid_argument);
  const SmoothingConfig bad_len{PerRowSelection{{0.5, 0.5}}, AblationNoise{}};
  EXPECT_THROW(enumerate_outcomes(ok, ok, bad_len), std::invalid_argument);
}

TEST(GaussianHalfspace, AgreesWithClosedForm) {
  for (double p : {0.2, 0.5, 0.8, 0.975}) {
    for (double dist : {0.0, 0.4, 1.3}) {
      EXPECT_NEAR(gaussian_halfspace_check(p, dist, 1.0), gaussian_lower_bound(p, dist, 1.0),
                  1e-9);
    }
  }
  EXPECT_NEAR(gaussian_halfspace_check(0.8, 0.5, 0.25), gaussian_lower_bound(0.8, 0.5, 0.25),
              1e-9);
  // Zero shift returns the budget itself.
  EXPECT_NEAR(gaussian_halfspace_check(0.73, 0.0, 1.0), 0.73, 1e-9);
}

}  // namespace
}  // namespace hrs
