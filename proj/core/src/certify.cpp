#include "hrs/certify.hpp"

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "hrs/certificates.hpp"
#include "hrs/sampling.hpp"
#include "hrs/stats.hpp"

namespace hrs {

namespace {

// Stream windows: each dataset sample owns 2^32 stream ids, split into
// 2^30-wide phases. Phase 0 is the selection round, phase 1 the estimation
// round; draw k within a phase uses stream id window_base + k.
constexpr std::uint64_t kPhaseStride = 1ull << 30;
constexpr std::uint64_t kSampleStride = 1ull << 32;

void check_params(const CertifyParams& params) {
  if (params.n0 == 0 || params.n1 == 0) {
    throw std::invalid_argument("certify: n0 and n1 must be positive");
  }
  if (params.n0 >= kPhaseStride || params.n1 >= kPhaseStride) {
    throw std::invalid_argument("certify: sample counts must be below 2^30");
  }
  if (!(params.alpha > 0.0 && params.alpha < 1.0)) {
    throw std::invalid_argument("certify: alpha must lie in (0, 1)");
  }
  if (params.workers < 1) {
    throw std::invalid_argument("certify: workers must be positive");
  }
}

}  // namespace

CertificateRecord certify_input(const BaseClassifier& classifier, const FeatureMatrix& x,
                                const SmoothingConfig& config,
                                const std::vector<ThreatModel>& threat_grid,
                                const CertifyParams& params, const RngKey& base,
                                const std::string& sample_id) {
  check_params(params);
  if (params.mode == CertifyMode::MultiClass && classifier.n_classes() < 2) {
    throw std::invalid_argument("certify: multi-class mode needs at least two classes");
  }
  for (const ThreatModel& threat : threat_grid) {
    validate_compatible(x.domain(), config, threat, x.n_rows(), x.n_cols());
  }

  const VoteCounts counts0 =
      sample_under_noise(classifier, x, config, params.n0, base.offset(0), params.workers);
  const std::size_t y_a = counts0.top_class();

  const VoteCounts counts1 =
      sample_under_noise(classifier, x, config, params.n1, base.offset(kPhaseStride),
                         params.workers);

  CertificateRecord rec;
  rec.sample_id = sample_id;

  bool abstained = false;
  if (params.mode == CertifyMode::Binary) {
    const ConfidenceSpec spec{params.alpha, 1};
    rec.p_lower = clopper_pearson_lower(counts1.counts()[y_a], params.n1,
                                        spec.per_bound_alpha());
    abstained = !(rec.p_lower > 0.5);
  } else {
    const std::size_t y_b = counts0.second_class();
    const ConfidenceSpec spec{params.alpha, 2};
    rec.p_lower = clopper_pearson_lower(counts1.counts()[y_a], params.n1,
                                        spec.per_bound_alpha());
    rec.p_upper_runner = clopper_pearson_upper(counts1.counts()[y_b], params.n1,
                                               spec.per_bound_alpha());
    abstained = !(rec.p_lower > *rec.p_upper_runner);
  }
  if (!abstained) {
    rec.predicted = static_cast<int>(y_a);
  }

  // The confidence bounds are radius-independent, so every grid point reuses
  // them; only the certificate transform varies with the threat.
  rec.verdicts.reserve(threat_grid.size());
  std::size_t max_r = 0;
  for (const ThreatModel& threat : threat_grid) {
    max_r = std::max(max_r, threat_rows(threat));
    GridVerdict verdict{threat, false};
    if (!abstained) {
      verdict.certified = certify_ball(rec.p_lower, rec.p_upper_runner, config, threat).certified;
    }
    rec.verdicts.push_back(verdict);
  }

  rec.delta = delta_for(config.selection, max_r).delta;
  if (!abstained && params.mode == CertifyMode::Binary &&
      std::holds_alternative<GaussianNoise>(config.lower)) {
    const double sigma = std::get<GaussianNoise>(config.lower).sigma;
    rec.max_epsilon = hier_gaussian_max_radius(rec.p_lower, sigma, rec.delta);
  }
  return rec;
}

DatasetEvaluation evaluate_dataset(const BaseClassifier& classifier, const Dataset& ds,
                                   const SmoothingConfig& config,
                                   const std::vector<ThreatModel>& threat_grid,
                                   const CertifyParams& params, std::uint64_t seed) {
  check_params(params);
  if (ds.samples.empty()) {
    throw std::invalid_argument("evaluate_dataset: empty dataset");
  }

  const std::size_t n = ds.samples.size();
  DatasetEvaluation out;
  out.records.resize(n);

  // With one sample all parallelism goes into vote sampling; with several,
  // samples are spread across workers and each certifies single-threaded.
  // Either way sample i draws from its own stream window, so records do not
  // depend on the schedule.
  const int outer = n > 1 ? static_cast<int>(std::min<std::size_t>(params.workers, n)) : 1;
  CertifyParams inner = params;
  inner.workers = n > 1 ? 1 : params.workers;

  auto run_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const LabeledSample& sample = ds.samples[i];
      const RngKey base{seed, static_cast<std::uint64_t>(i) * kSampleStride};
      out.records[i] = certify_input(classifier, sample.x, config, threat_grid, inner, base,
                                     sample.id);
    }
  };

  if (outer <= 1) {
    run_range(0, n);
  } else {
    std::vector<std::thread> threads;
    std::mutex err_mu;
    std::size_t failed_at = n;
    std::exception_ptr error;
    const std::size_t chunk = (n + outer - 1) / outer;
    for (int w = 0; w < outer; ++w) {
      const std::size_t begin = std::min(n, static_cast<std::size_t>(w) * chunk);
      const std::size_t end = std::min(n, begin + chunk);
      threads.emplace_back([&, begin, end] {
        try {
          run_range(begin, end);
        } catch (...) {
          // Keep the error from the earliest chunk so reruns fail identically.
          std::lock_guard<std::mutex> lock(err_mu);
          if (begin < failed_at) {
            failed_at = begin;
            error = std::current_exception();
          }
        }
      });
    }
    for (std::thread& t : threads) {
      t.join();
    }
    if (error) {
      std::rethrow_exception(error);
    }
  }

  std::size_t clean = 0;
  std::vector<std::size_t> certified(threat_grid.size(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    const CertificateRecord& rec = out.records[i];
    const bool correct = rec.predicted.has_value() && *rec.predicted == ds.samples[i].label;
    if (correct) {
      ++clean;
      for (std::size_t g = 0; g < threat_grid.size(); ++g) {
        if (rec.verdicts[g].certified) {
          ++certified[g];
        }
      }
    }
  }
  out.clean_accuracy = static_cast<double>(clean) / static_cast<double>(n);
  out.certified_accuracy.resize(threat_grid.size());
  for (std::size_t g = 0; g < threat_grid.size(); ++g) {
    out.certified_accuracy[g] = static_cast<double>(certified[g]) / static_cast<double>(n);
  }
  return out;
}

}  // namespace hrs
