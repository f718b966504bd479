#include "hrs/certificates.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hrs/rng.hpp"

namespace hrs {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

TEST(Delta, UniformValuesAndEdges) {
  EXPECT_NEAR(delta_uniform(0.9, 2).delta, 0.19, 1e-15);
  EXPECT_EQ(delta_uniform(0.7, 0).delta, 0.0);
  EXPECT_EQ(delta_uniform(1.0, 50).delta, 0.0);
  EXPECT_EQ(delta_uniform(0.0, 1).delta, 1.0);
  EXPECT_EQ(delta_uniform(0.9, 2).r_used, 2u);
  EXPECT_THROW(delta_uniform(-0.1, 1), std::invalid_argument);
  EXPECT_THROW(delta_uniform(1.1, 1), std::invalid_argument);
}

TEST(Delta, UniformMonotonicity) {
  // Larger p keeps more rows unnoised, so delta falls; larger r grows it.
  for (double p : {0.1, 0.4, 0.8}) {
    EXPECT_GE(delta_uniform(p, 3).delta, delta_uniform(p + 0.1, 3).delta);
    EXPECT_LE(delta_uniform(p, 2).delta, delta_uniform(p, 3).delta);
  }
}

TEST(Delta, NonuniformWorstSubset) {
  EXPECT_NEAR(delta_nonuniform({0.5, 0.9, 0.99}, 2).delta, 0.55, 1e-15);
  EXPECT_NEAR(delta_nonuniform({0.99, 0.5, 0.9}, 2).delta, 0.55, 1e-15);
  EXPECT_EQ(delta_nonuniform({0.3, 0.4}, 0).delta, 0.0);
  EXPECT_THROW(delta_nonuniform({0.5, 0.5}, 3), std::invalid_argument);
  EXPECT_THROW(delta_nonuniform({0.5, 1.5}, 1), std::invalid_argument);
  // Equal probabilities reduce to the uniform formula.
  EXPECT_NEAR(delta_nonuniform({0.8, 0.8, 0.8}, 2).delta, delta_uniform(0.8, 2).delta, 1e-15);
}

TEST(Delta, DispatchesOnSelectionKind) {
  EXPECT_NEAR(delta_for(UniformSelection{0.9}, 2).delta, 0.19, 1e-15);
  EXPECT_NEAR(delta_for(PerRowSelection{{0.5, 0.9, 0.99}}, 2).delta, 0.55, 1e-15);
}

TEST(Delta, FixedKeepSubsets) {
  EXPECT_NEAR(delta_keep_subset(4, 1, 1), 0.25, 1e-12);
  EXPECT_NEAR(delta_keep_subset(4, 2, 1), 0.5, 1e-12);
  EXPECT_NEAR(delta_keep_subset(5, 2, 2), 0.7, 1e-12);
  EXPECT_EQ(delta_keep_subset(5, 2, 0), 0.0);
  EXPECT_EQ(delta_keep_subset(4, 4, 1), 1.0);
  EXPECT_THROW(delta_keep_subset(3, 4, 1), std::invalid_argument);
}

TEST(GaussianBounds, FrozenValues) {
  EXPECT_NEAR(gaussian_lower_bound(0.8, 0.5, 1.0), 0.63368202224060437, 1e-12);
  EXPECT_NEAR(gaussian_upper_bound(0.8, 0.5, 1.0), 0.91014058107663346, 1e-12);
  EXPECT_NEAR(gaussian_lower_bound(0.99, 1.0, 1.0), 0.90763775192630606, 1e-12);
}

TEST(GaussianBounds, EdgesAndValidation) {
  EXPECT_EQ(gaussian_lower_bound(0.0, 1.0, 1.0), 0.0);
  EXPECT_EQ(gaussian_lower_bound(1.0, 1.0, 1.0), 1.0);
  EXPECT_EQ(gaussian_upper_bound(0.0, 1.0, 1.0), 0.0);
  EXPECT_EQ(gaussian_upper_bound(1.0, 1.0, 1.0), 1.0);
  EXPECT_NEAR(gaussian_lower_bound(0.37, 0.0, 2.0), 0.37, 1e-12);
  EXPECT_THROW(gaussian_lower_bound(0.5, 0.5, 0.0), std::invalid_argument);
  EXPECT_THROW(gaussian_lower_bound(0.5, -0.5, 1.0), std::invalid_argument);
  EXPECT_THROW(gaussian_upper_bound(0.5, 0.5, -1.0), std::invalid_argument);
}

TEST(HierGaussian, FrozenValues) {
  // delta = 1 - 0.85^3 = 0.385875.
  EXPECT_NEAR(hier_gaussian_lower(0.99, 0.3, 0.5, 0.385875), 0.57598815518102103, 1e-12);
  EXPECT_NEAR(hier_gaussian_upper(0.5, 0.3, 0.5, 0.19), 0.85055652805348212, 1e-12);
}

TEST(HierGaussian, DeltaZeroReducesExactly) {
  for (double p : {0.1, 0.5, 0.8, 0.99}) {
    for (double eps : {0.0, 0.25, 1.0}) {
      EXPECT_DOUBLE_EQ(hier_gaussian_lower(p, eps, 0.7, 0.0),
                       gaussian_lower_bound(p, eps, 0.7));
      EXPECT_DOUBLE_EQ(hier_gaussian_upper(p, eps, 0.7, 0.0),
                       gaussian_upper_bound(p, eps, 0.7));
    }
  }
}

TEST(HierGaussian, ShortCircuitsAndEdges) {
  EXPECT_EQ(hier_gaussian_lower(0.9, 0.5, 1.0, 1.0), 0.0);
  EXPECT_EQ(hier_gaussian_upper(0.9, 0.5, 1.0, 1.0), 1.0);
  // Budget at or below zero: nothing survives the transform.
  EXPECT_EQ(hier_gaussian_lower(0.2, 0.5, 1.0, 0.3), 0.0);
  // Budget saturates at one: the bound caps at 1 - delta (lower), 1 (upper).
  EXPECT_DOUBLE_EQ(hier_gaussian_lower(1.0, 0.5, 1.0, 0.3), 0.7);
  EXPECT_EQ(hier_gaussian_upper(0.8, 0.5, 1.0, 0.3), 1.0);
  EXPECT_THROW(hier_gaussian_lower(0.9, 0.5, 1.0, -0.1), std::invalid_argument);
  EXPECT_THROW(hier_gaussian_lower(0.9, 0.5, 1.0, 1.5), std::invalid_argument);
}

TEST(HierGaussian, SandwichAtSamplePoints) {
  for (double p : {0.3, 0.6, 0.9}) {
    for (double d : {0.0, 0.1, 0.4}) {
      const double lo = hier_gaussian_lower(p, 0.4, 0.8, d);
      const double hi = hier_gaussian_upper(p, 0.4, 0.8, d);
      EXPECT_LE(lo, p + 1e-15);
      EXPECT_GE(hi, p - 1e-15);
      EXPECT_LE(lo, hi);
    }
  }
}

TEST(HierGaussianMaxRadius, FrozenValues) {
  EXPECT_NEAR(hier_gaussian_max_radius(0.99, 1.0, 0.19), 1.9478423628469363, 1e-12);
  EXPECT_NEAR(hier_gaussian_max_radius(0.975, 1.0, 0.0), 1.9599639845400542, 1e-12);
}

TEST(HierGaussianMaxRadius, EdgesAndBoundaryConsistency) {
  EXPECT_EQ(hier_gaussian_max_radius(0.99, 1.0, 0.5), 0.0);
  EXPECT_EQ(hier_gaussian_max_radius(0.99, 1.0, 0.8), 0.0);
  EXPECT_EQ(hier_gaussian_max_radius(0.6, 1.0, 0.19), 0.0);  // budget below the floor
  EXPECT_EQ(hier_gaussian_max_radius(1.0, 1.0, 0.19), kUnboundedRadius);

  // At the returned radius the lower bound sits exactly on the 1/2 line;
  // nudging the radius moves it across.
  const double sigma = 0.7;
  const double delta = 0.19;
  const double p = 0.95;
  const double radius = hier_gaussian_max_radius(p, sigma, delta);
  ASSERT_GT(radius, 0.0);
  ASSERT_TRUE(std::isfinite(radius));
  EXPECT_NEAR(hier_gaussian_lower(p, radius, sigma, delta), 0.5, 1e-9);
  EXPECT_GT(hier_gaussian_lower(p, radius * 0.999, sigma, delta), 0.5);
  EXPECT_LT(hier_gaussian_lower(p, radius * 1.001, sigma, delta), 0.5);
}

TEST(RegionTable, SparseSingleAdditionMasses) {
  const RegionTable t = sparse_regions(1, 0, 0.1, 0.4);
  ASSERT_EQ(t.regions().size(), 2u);
  // Descending ratio: the cell staying 0 first, the cell rising to 1 second.
  EXPECT_NEAR(std::exp(t.regions()[0].log_ratio), 2.25, 1e-12);
  EXPECT_NEAR(std::exp(t.regions()[0].log_mass_clean), 0.9, 1e-12);
  EXPECT_NEAR(std::exp(t.regions()[0].log_mass_perturbed), 0.4, 1e-12);
  EXPECT_NEAR(std::exp(t.regions()[1].log_ratio), 1.0 / 6.0, 1e-12);
  EXPECT_NEAR(std::exp(t.regions()[1].log_mass_clean), 0.1, 1e-12);
  EXPECT_NEAR(std::exp(t.regions()[1].log_mass_perturbed), 0.6, 1e-12);
}

TEST(RegionTable, SparseSingleDeletionMasses) {
  const RegionTable t = sparse_regions(0, 1, 0.1, 0.4);
  ASSERT_EQ(t.regions().size(), 2u);
  EXPECT_NEAR(std::exp(t.regions()[0].log_ratio), 6.0, 1e-12);
  EXPECT_NEAR(std::exp(t.regions()[0].log_mass_clean), 0.6, 1e-12);
  EXPECT_NEAR(std::exp(t.regions()[0].log_mass_perturbed), 0.1, 1e-12);
  EXPECT_NEAR(std::exp(t.regions()[1].log_ratio), 4.0 / 9.0, 1e-12);
  EXPECT_NEAR(std::exp(t.regions()[1].log_mass_clean), 0.4, 1e-12);
  EXPECT_NEAR(std::exp(t.regions()[1].log_mass_perturbed), 0.9, 1e-12);
}

TEST(RegionTable, DegenerateFlipsCollapseToOneRegion) {
  // p_plus = 0 and p_minus = 1 make the two distributions agree everywhere.
  const RegionTable t = sparse_regions(1, 0, 0.0, 1.0);
  ASSERT_EQ(t.regions().size(), 1u);
  EXPECT_NEAR(t.regions()[0].log_ratio, 0.0, 1e-12);
  EXPECT_NEAR(std::exp(t.regions()[0].log_mass_clean), 1.0, 1e-12);
  EXPECT_NEAR(std::exp(t.regions()[0].log_mass_perturbed), 1.0, 1e-12);
  for (double b : {0.0, 0.3, 0.8, 1.0}) {
    EXPECT_NEAR(discrete_lp_lower(t, b), b, 1e-12);
  }
}

TEST(RegionTable, SortsMergesAndValidates) {
  const double l3 = std::log(0.3);
  const double l7 = std::log(0.7);
  const RegionTable merged({Region{0.5, l3, l3}, Region{1.0, l7, l7}});
  ASSERT_EQ(merged.regions().size(), 2u);
  EXPECT_EQ(merged.regions()[0].log_ratio, 1.0);

  const RegionTable collapsed({Region{0.2, l3, l3}, Region{0.2, l7, l7}});
  ASSERT_EQ(collapsed.regions().size(), 1u);
  EXPECT_NEAR(std::exp(collapsed.regions()[0].log_mass_clean), 1.0, 1e-12);

  // Masses that do not sum to one on either side are rejected.
  EXPECT_THROW(RegionTable({Region{0.0, l3, 0.0}}), std::invalid_argument);
  EXPECT_THROW(RegionTable({Region{0.0, 0.0, l3}}), std::invalid_argument);
  EXPECT_THROW(RegionTable({Region{0.0, 0.5, 0.0}}), std::invalid_argument);
  EXPECT_THROW(RegionTable({Region{NAN, 0.0, 0.0}}), std::invalid_argument);
}

TEST(RegionTable, SparseRejectsDegenerateProbabilities) {
  EXPECT_THROW(sparse_regions(1, 0, 1.0, 0.5), std::invalid_argument);
  EXPECT_THROW(sparse_regions(1, 0, -0.1, 0.5), std::invalid_argument);
  EXPECT_THROW(sparse_regions(0, 1, 0.1, 0.0), std::invalid_argument);
  EXPECT_THROW(sparse_regions(0, 1, 0.1, 1.5), std::invalid_argument);
}

TEST(DiscreteLp, FrozenGreedyValues) {
  const RegionTable t = sparse_regions(1, 0, 0.1, 0.4);
  EXPECT_NEAR(discrete_lp_lower(t, 0.9), 0.4, 1e-12);
  EXPECT_NEAR(discrete_lp_lower(t, 0.95), 0.7, 1e-12);
  EXPECT_NEAR(discrete_lp_lower(t, 1.0), 1.0, 1e-12);
  EXPECT_NEAR(discrete_lp_upper(t, 0.1), 0.6, 1e-12);
  // Budgets clamp to [0, 1].
  EXPECT_EQ(discrete_lp_lower(t, -0.5), 0.0);
  EXPECT_NEAR(discrete_lp_lower(t, 1.5), 1.0, 1e-12);
  EXPECT_NEAR(discrete_lp_upper(t, 1.5), 1.0, 1e-12);
}

TEST(DiscreteLp, MonotoneInBudget) {
  const RegionTable t = sparse_regions(2, 1, 0.15, 0.55);
  double prev_lo = -1.0;
  double prev_hi = -1.0;
  for (double b = 0.0; b <= 1.0; b += 0.05) {
    const double lo = discrete_lp_lower(t, b);
    const double hi = discrete_lp_upper(t, b);
    EXPECT_GE(lo, prev_lo);
    EXPECT_GE(hi, prev_hi);
    EXPECT_LE(lo, hi + 1e-12);
    prev_lo = lo;
    prev_hi = hi;
  }
}

TEST(DiscreteLp, UpperIsComplementOfLower) {
  // Total mass is 1 on both sides, so maximizing what the budget's complement
  // cannot pin down mirrors minimizing what the budget can.
  const RegionTable t = sparse_regions(2, 1, 0.15, 0.55);
  RngStream rng(31, 1);
  for (int i = 0; i < 200; ++i) {
    const double b = rng.next_unit();
    EXPECT_NEAR(discrete_lp_upper(t, b), 1.0 - discrete_lp_lower(t, 1.0 - b), 1e-12);
  }
}

TEST(HierDiscrete, FrozenValuesAndShortCircuits) {
  const RegionTable t = sparse_regions(1, 0, 0.1, 0.4);
  EXPECT_NEAR(hier_discrete_lower(0.9, 0.2, t), 14.0 / 45.0, 1e-12);
  EXPECT_NEAR(hier_discrete_upper(0.3, 0.2, t), 7.0 / 9.0, 1e-12);
  EXPECT_EQ(hier_discrete_lower(0.9, 1.0, t), 0.0);
  EXPECT_EQ(hier_discrete_upper(0.9, 1.0, t), 1.0);
  EXPECT_EQ(hier_discrete_lower(0.1, 0.2, t), 0.0);
  // Delta zero reduces to the plain table bounds.
  EXPECT_DOUBLE_EQ(hier_discrete_lower(0.9, 0.0, t), discrete_lp_lower(t, 0.9));
  EXPECT_DOUBLE_EQ(hier_discrete_upper(0.3, 0.0, t), discrete_lp_upper(t, 0.3));
}

TEST(AblationBounds, ShiftAndClamp) {
  EXPECT_DOUBLE_EQ(ablation_lower(0.7, 0.2), 0.5);
  EXPECT_DOUBLE_EQ(ablation_upper(0.7, 0.2), 0.9);
  EXPECT_EQ(ablation_lower(0.1, 0.3), 0.0);
  EXPECT_EQ(ablation_upper(0.9, 0.3), 1.0);
  EXPECT_THROW(ablation_lower(0.5, -0.1), std::invalid_argument);
}

TEST(CertifyBall, GaussianBinaryThresholds) {
  const SmoothingConfig config{UniformSelection{1.0}, GaussianNoise{1.0}};
  const BallCertificate in = certify_ball(0.975, std::nullopt, config, ContinuousL2{1, 1.9});
  EXPECT_TRUE(in.certified);
  ASSERT_TRUE(in.max_epsilon.has_value());
  EXPECT_NEAR(*in.max_epsilon, 1.9599639845400542, 1e-12);

  const BallCertificate out = certify_ball(0.975, std::nullopt, config, ContinuousL2{1, 2.0});
  EXPECT_FALSE(out.certified);
  ASSERT_TRUE(out.max_epsilon.has_value());
}

TEST(CertifyBall, GaussianHierarchicalUsesThreatRows) {
  // p = 0.9, r = 2 -> delta = 0.19.
  const SmoothingConfig config{UniformSelection{0.9}, GaussianNoise{1.0}};
  const double radius = hier_gaussian_max_radius(0.99, 1.0, 0.19);
  EXPECT_TRUE(certify_ball(0.99, std::nullopt, config, ContinuousL2{2, radius * 0.99}).certified);
  EXPECT_FALSE(
      certify_ball(0.99, std::nullopt, config, ContinuousL2{2, radius * 1.01}).certified);
}

TEST(CertifyBall, GaussianMultiClassComparesRunnerUp) {
  const SmoothingConfig config{UniformSelection{1.0}, GaussianNoise{1.0}};
  const ThreatModel t = ContinuousL2{1, 0.2};
  const BallCertificate wide = certify_ball(0.9, 0.05, config, t);
  EXPECT_TRUE(wide.certified);
  EXPECT_FALSE(wide.max_epsilon.has_value());
  const BallCertificate tight = certify_ball(0.55, 0.45, config, t);
  EXPECT_FALSE(tight.certified);
}

TEST(CertifyBall, SparseFlipBinary) {
  const SmoothingConfig strong{UniformSelection{1.0}, SparseFlipNoise{0.4, 0.5}};
  EXPECT_TRUE(certify_ball(0.95, std::nullopt, strong, DiscreteFlip{1, 1, 0}).certified);
  const SmoothingConfig weak{UniformSelection{0.8}, SparseFlipNoise{0.1, 0.4}};
  EXPECT_FALSE(certify_ball(0.9, std::nullopt, weak, DiscreteFlip{1, 1, 0}).certified);
}

TEST(CertifyBall, AblationAcceptsBothThreatKinds) {
  // p = 0.9, r = 1 -> delta = 0.1; 0.7 - 0.1 > 0.5.
  const SmoothingConfig config{UniformSelection{0.9}, AblationNoise{}};
  EXPECT_TRUE(certify_ball(0.7, std::nullopt, config, ContinuousL2{1, 3.0}).certified);
  EXPECT_TRUE(certify_ball(0.7, std::nullopt, config, DiscreteFlip{1, 2, 2}).certified);
  EXPECT_FALSE(certify_ball(0.55, std::nullopt, config, ContinuousL2{1, 3.0}).certified);
  // Multi-class: 0.7 - 0.1 vs 0.2 + 0.1.
  EXPECT_TRUE(certify_ball(0.7, 0.2, config, ContinuousL2{1, 3.0}).certified);
  EXPECT_FALSE(certify_ball(0.7, 0.55, config, ContinuousL2{1, 3.0}).certified);
}

TEST(CertifyBall, RejectsMismatchedNoiseAndThreat) {
  const SmoothingConfig gauss{UniformSelection{1.0}, GaussianNoise{1.0}};
  EXPECT_THROW(certify_ball(0.9, std::nullopt, gauss, DiscreteFlip{1, 1, 0}),
               std::invalid_argument);
  const SmoothingConfig flips{UniformSelection{1.0}, SparseFlipNoise{0.1, 0.4}};
  EXPECT_THROW(certify_ball(0.9, std::nullopt, flips, ContinuousL2{1, 0.5}),
               std::invalid_argument);
}

}  // namespace
}  // namespace hrs
