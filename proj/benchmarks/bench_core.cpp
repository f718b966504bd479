#include <benchmark/benchmark.h>

#include <cstddef>

#include "hrs/certificates.hpp"
#include "hrs/classifier.hpp"
#include "hrs/config.hpp"
#include "hrs/matrix.hpp"
#include "hrs/sampling.hpp"
#include "hrs/stats.hpp"

namespace {

void BM_SparseRegions(benchmark::State& state) {
  const auto ra = static_cast<std::size_t>(state.range(0));
  const auto rd = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(hrs::sparse_regions(ra, rd, 0.1, 0.4));
  }
}
BENCHMARK(BM_SparseRegions)->Args({1, 1})->Args({3, 3})->Args({8, 8});

void BM_DiscreteLpLower(benchmark::State& state) {
  const auto ra = static_cast<std::size_t>(state.range(0));
  const hrs::RegionTable table = hrs::sparse_regions(ra, ra, 0.1, 0.4);
  double budget = 0.5;
  for (auto _ : state) {
    budget = budget < 0.99 ? budget + 0.001 : 0.5;
    benchmark::DoNotOptimize(hrs::discrete_lp_lower(table, budget));
  }
}
BENCHMARK(BM_DiscreteLpLower)->Arg(1)->Arg(3)->Arg(8);

void BM_HierGaussianLower(benchmark::State& state) {
  double p = 0.6;
  for (auto _ : state) {
    p = p < 0.99 ? p + 0.0001 : 0.6;
    benchmark::DoNotOptimize(hrs::hier_gaussian_lower(p, 0.5, 0.7, 0.19));
  }
}
BENCHMARK(BM_HierGaussianLower);

void BM_HierGaussianMaxRadius(benchmark::State& state) {
  double p = 0.6;
  for (auto _ : state) {
    p = p < 0.99 ? p + 0.0001 : 0.6;
    benchmark::DoNotOptimize(hrs::hier_gaussian_max_radius(p, 0.7, 0.19));
  }
}
BENCHMARK(BM_HierGaussianMaxRadius);

void BM_ClopperPearsonLower(benchmark::State& state) {
  std::uint64_t k = 700;
  for (auto _ : state) {
    k = k < 999 ? k + 1 : 700;
    benchmark::DoNotOptimize(hrs::clopper_pearson_lower(k, 1000, 0.01));
  }
}
BENCHMARK(BM_ClopperPearsonLower);

void BM_SampleUnderNoise(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const hrs::FeatureMatrix x = hrs::FeatureMatrix::zeros(8, 4, hrs::Domain::Binary);
  const hrs::SmoothingConfig config{hrs::UniformSelection{0.8},
                                    hrs::SparseFlipNoise{0.1, 0.4}};
  const auto classifier = hrs::make_builtin_classifier("first_cell");
  const hrs::RngKey key{7, 0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(hrs::sample_under_noise(*classifier, x, config, n, key));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(n));
}
BENCHMARK(BM_SampleUnderNoise)->Arg(100)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
