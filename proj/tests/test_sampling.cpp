#include "hrs/sampling.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hrs/classifier.hpp"
#include "hrs/matrix.hpp"
#include "hrs/rng.hpp"

namespace hrs {
namespace {

TEST(RngStream, GoldenU64Sequence) {
  RngStream rng(1, 2);
  EXPECT_EQ(rng.next_u64(), 6001130350236149310ULL);
  EXPECT_EQ(rng.next_u64(), 17622432945560703041ULL);
  EXPECT_EQ(rng.next_u64(), 8812930288488511310ULL);
  EXPECT_EQ(rng.next_u64(), 12975764380530464700ULL);
}

TEST(RngStream, GoldenUnitAndGaussian) {
  RngStream u(1, 2);
  EXPECT_DOUBLE_EQ(u.next_unit(), 0.32532192815473637);

  RngStream g(42, 7);
  EXPECT_DOUBLE_EQ(g.next_gaussian(), 0.16771833657061144);
  EXPECT_DOUBLE_EQ(g.next_gaussian(), 0.96282160290091234);
}

TEST(RngStream, SameKeySameSequence) {
  RngStream a(123, 456);
  RngStream b(123, 456);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(RngStream, DistinctStreamsDiverge) {
  RngStream a(1, 2);
  RngStream b(1, 3);
  RngStream c(2, 2);
  bool ab = false;
  bool ac = false;
  for (int i = 0; i < 16; ++i) {
    const std::uint64_t va = a.next_u64();
    if (va != b.next_u64()) ab = true;
    if (va != c.next_u64()) ac = true;
  }
  EXPECT_TRUE(ab);
  EXPECT_TRUE(ac);
}

TEST(RngStream, UnitStaysInHalfOpenInterval) {
  RngStream rng(7, 7);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.next_unit();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(RngStream, BernoulliEdgesNeverAndAlways) {
  RngStream rng(3, 1);
  for (int i = 0; i < 1000; ++i) EXPECT_FALSE(rng.next_bernoulli(0.0));
  for (int i = 0; i < 1000; ++i) EXPECT_TRUE(rng.next_bernoulli(1.0));
}

TEST(RngStream, BernoulliConsumesOneDraw) {
  RngStream a(11, 4);
  RngStream b(11, 4);
  for (int i = 0; i < 5; ++i) a.next_bernoulli(0.5);
  for (int i = 0; i < 5; ++i) b.next_u64();
  EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(RngKey, OffsetAddressesShiftedStream) {
  const RngKey key{5, 10};
  RngStream via_offset = key.offset(7).make();
  RngStream direct(5, 17);
  for (int i = 0; i < 8; ++i) EXPECT_EQ(via_offset.next_u64(), direct.next_u64());
}

TEST(SampleTau, UniformEdgesAndDrawCount) {
  RngStream rng(1, 1);
  const auto none = sample_tau(UniformSelection{0.0}, 6, rng);
  EXPECT_EQ(none, (std::vector<std::uint8_t>{0, 0, 0, 0, 0, 0}));
  const auto all = sample_tau(UniformSelection{1.0}, 4, rng);
  EXPECT_EQ(all, (std::vector<std::uint8_t>{1, 1, 1, 1}));

  // One draw per row: a stream advanced by hand lands in the same state.
  RngStream a(9, 2);
  RngStream b(9, 2);
  sample_tau(UniformSelection{0.5}, 3, a);
  for (int i = 0; i < 3; ++i) b.next_u64();
  EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(SampleTau, PerRowForcedAndMismatch) {
  RngStream rng(4, 4);
  for (int rep = 0; rep < 50; ++rep) {
    const auto tau = sample_tau(PerRowSelection{{0.0, 1.0, 0.5}}, 3, rng);
    EXPECT_EQ(tau[0], 0);
    EXPECT_EQ(tau[1], 1);
  }
  RngStream r2(4, 5);
  EXPECT_THROW(sample_tau(PerRowSelection{{0.5, 0.5}}, 3, r2), std::invalid_argument);
}

TEST(ApplyLowerNoise, UnselectedRowsAreBitExact) {
  const FeatureMatrix x(2, 3, Domain::Real, {0.1, -2.0, 3.5, 4.0, 0.0, -1.25});
  RngStream a(6, 1);
  RngStream b(6, 1);
  const ExtendedMatrix z = apply_lower_noise(x, {0, 0}, GaussianNoise{1.0}, a);
  EXPECT_EQ(z.base(), x);
  EXPECT_EQ(z.indicator(), (std::vector<std::uint8_t>{0, 0}));
  // No rows selected, so no draws consumed.
  EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(ApplyLowerNoise, GaussianMatchesManualReplay) {
  const FeatureMatrix x(2, 2, Domain::Real, {1.0, 2.0, 3.0, 4.0});
  const double sigma = 0.7;
  RngStream call(12, 3);
  const ExtendedMatrix z = apply_lower_noise(x, {1, 0}, GaussianNoise{sigma}, call);

  RngStream replay(12, 3);
  EXPECT_EQ(z.at(0, 0), 1.0 + sigma * replay.next_gaussian());
  EXPECT_EQ(z.at(0, 1), 2.0 + sigma * replay.next_gaussian());
  EXPECT_EQ(z.at(1, 0), 3.0);
  EXPECT_EQ(z.at(1, 1), 4.0);
  EXPECT_EQ(z.indicator(), (std::vector<std::uint8_t>{1, 0}));
}

TEST(ApplyLowerNoise, AblationZeroesSelectedRowsWithoutDraws) {
  const FeatureMatrix x(3, 2, Domain::Binary, {1, 0, 0, 1, 1, 1});
  RngStream a(2, 2);
  RngStream b(2, 2);
  const ExtendedMatrix z = apply_lower_noise(x, {1, 0, 1}, AblationNoise{}, a);
  EXPECT_EQ(z.base().values(), (std::vector<double>{0, 0, 0, 1, 0, 0}));
  EXPECT_EQ(z.indicator(), (std::vector<std::uint8_t>{1, 0, 1}));
  EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(ApplyLowerNoise, SparseFlipKeepsBinaryDomain) {
  const FeatureMatrix x(2, 4, Domain::Binary, {1, 0, 1, 0, 0, 1, 0, 1});
  RngStream rng(8, 8);
  for (int rep = 0; rep < 200; ++rep) {
    const ExtendedMatrix z = apply_lower_noise(x, {1, 1}, SparseFlipNoise{0.3, 0.6}, rng);
    for (double v : z.base().values()) EXPECT_TRUE(v == 0.0 || v == 1.0);
  }
}

TEST(ApplyLowerNoise, SparseFlipEdgeProbabilities) {
  const FeatureMatrix x(1, 4, Domain::Binary, {1, 0, 1, 0});
  RngStream rng(5, 5);
  // p_plus = 0: zeros never rise. p_minus = 1: selected ones always drop.
  const ExtendedMatrix z = apply_lower_noise(x, {1}, SparseFlipNoise{0.0, 1.0}, rng);
  EXPECT_EQ(z.base().values(), (std::vector<double>{0, 0, 0, 0}));
}

TEST(ApplyLowerNoise, RejectsDomainMismatchAndBadTau) {
  const FeatureMatrix real(1, 1, Domain::Real, {0.5});
  const FeatureMatrix bin(1, 1, Domain::Binary, {1.0});
  RngStream rng(1, 1);
  EXPECT_THROW(apply_lower_noise(bin, {1}, GaussianNoise{1.0}, rng), std::invalid_argument);
  EXPECT_THROW(apply_lower_noise(real, {1}, SparseFlipNoise{0.1, 0.5}, rng),
               std::invalid_argument);
  EXPECT_THROW(apply_lower_noise(real, {1, 0}, AblationNoise{}, rng), std::invalid_argument);
}

TEST(SampleUnderNoise, CountsSumAndWorkerIndependence) {
  const FeatureMatrix x(2, 2, Domain::Binary, {0, 1, 1, 0});
  const SmoothingConfig config{UniformSelection{0.8}, SparseFlipNoise{0.2, 0.4}};
  const auto clf = make_builtin_classifier("first_cell");
  const RngKey base{77, 0};

  const VoteCounts w1 = sample_under_noise(*clf, x, config, 500, base, 1);
  EXPECT_EQ(w1.n(), 500u);
  EXPECT_EQ(w1.counts()[0] + w1.counts()[1], 500u);

  const VoteCounts w4 = sample_under_noise(*clf, x, config, 500, base, 4);
  const VoteCounts w9 = sample_under_noise(*clf, x, config, 500, base, 9);
  EXPECT_EQ(w1, w4);
  EXPECT_EQ(w1, w9);
  // Both classes actually occur at these settings.
  EXPECT_GT(w1.counts()[0], 0u);
  EXPECT_GT(w1.counts()[1], 0u);
}

TEST(SampleUnderNoise, ZeroDrawsYieldEmptyTally) {
  const FeatureMatrix x(1, 1, Domain::Binary, {0});
  const SmoothingConfig config{UniformSelection{0.5}, SparseFlipNoise{0.1, 0.5}};
  const auto clf = make_builtin_classifier("first_cell");
  const VoteCounts v = sample_under_noise(*clf, x, config, 0, RngKey{1, 0}, 4);
  EXPECT_EQ(v.n(), 0u);
}

TEST(SampleUnderNoise, RejectsInvalidConfig) {
  const FeatureMatrix x(1, 1, Domain::Binary, {0});
  const auto clf = make_builtin_classifier("first_cell");
  const SmoothingConfig bad{UniformSelection{1.5}, SparseFlipNoise{0.1, 0.5}};
  EXPECT_THROW(sample_under_noise(*clf, x, bad, 10, RngKey{1, 0}, 1), std::invalid_argument);
}

class ThrowOnOne : public BaseClassifier {
 public:
  int classify(const ExtendedMatrix& z) const override {
    if (z.at(0, 0) == 1.0) throw std::runtime_error("poisoned cell");
    return 0;
  }
  int n_classes() const override { return 2; }
};

TEST(SampleUnderNoise, ReportsEarliestFailingDrawAcrossWorkers) {
  // 1x1 zero matrix under sparse flips: z(0,0) == 1 only when the row is
  // selected and the up-flip fires. Find the first such draw by replay.
  const FeatureMatrix x(1, 1, Domain::Binary, {0});
  const SmoothingConfig config{UniformSelection{0.5}, SparseFlipNoise{0.5, 0.5}};
  const RngKey base{2024, 0};
  const std::size_t n = 64;

  std::size_t first_bad = n;
  for (std::size_t k = 0; k < n; ++k) {
    RngStream rng = base.offset(k).make();
    const auto tau = sample_tau(config.selection, 1, rng);
    const ExtendedMatrix z = apply_lower_noise(x, tau, config.lower, rng);
    if (z.at(0, 0) == 1.0) {
      first_bad = k;
      break;
    }
  }
  ASSERT_LT(first_bad, n);

  const ThrowOnOne clf;
  const std::string want = "sampling draw " + std::to_string(first_bad) + " failed";
  for (int workers : {1, 3, 8}) {
    try {
      sample_under_noise(clf, x, config, n, base, workers);
      FAIL() << "expected failure at workers=" << workers;
    } catch (const std::runtime_error& e) {
      EXPECT_NE(std::string(e.what()).find(want), std::string::npos) << e.what();
      EXPECT_NE(std::string(e.what()).find("poisoned cell"), std::string::npos);
    }
  }
}

class OutOfRange : public BaseClassifier {
 public:
  int classify(const ExtendedMatrix&) const override { return 5; }
  int n_classes() const override { return 2; }
};

TEST(SampleUnderNoise, RejectsClassOutsideRange) {
  const FeatureMatrix x(1, 1, Domain::Binary, {0});
  const SmoothingConfig config{UniformSelection{0.5}, SparseFlipNoise{0.1, 0.5}};
  const OutOfRange clf;
  try {
    sample_under_noise(clf, x, config, 4, RngKey{1, 0}, 1);
    FAIL() << "expected failure";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("sampling draw 0 failed"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("outside [0, 2)"), std::string::npos);
  }
}

}  // namespace
}  // namespace hrs
