#pragma once

#include <cstdint>
#include <vector>

#include "hrs/classifier.hpp"
#include "hrs/config.hpp"
#include "hrs/dataset.hpp"
#include "hrs/record.hpp"
#include "hrs/rng.hpp"

namespace hrs {

enum class CertifyMode { Binary, MultiClass };

struct CertifyParams {
  std::size_t n0 = 1000;    // selection round: picks the candidate class
  std::size_t n1 = 10000;   // estimation round: bounds its probability
  double alpha = 0.01;      // total failure probability per input
  CertifyMode mode = CertifyMode::Binary;
  int workers = 1;
};

// Certifies one input: a selection round picks the top class, an estimation
// round bounds its probability (binary mode: one lower bound at alpha;
// multi-class mode: lower bound on the top class and upper bound on the
// runner-up, each at alpha/2), then every threat grid point is tested with
// the same bounds. Abstains when the zero-threat test already fails. The two
// rounds draw from disjoint stream windows of `base`.
CertificateRecord certify_input(const BaseClassifier& classifier, const FeatureMatrix& x,
                                const SmoothingConfig& config,
                                const std::vector<ThreatModel>& threat_grid,
                                const CertifyParams& params, const RngKey& base,
                                const std::string& sample_id = "");

struct DatasetEvaluation {
  std::vector<CertificateRecord> records;  // dataset order
  double clean_accuracy = 0.0;             // correct, non-abstaining majority votes
  std::vector<double> certified_accuracy;  // per threat grid point; <= clean
};

// Runs certify_input over a dataset. Sample i uses the stream window
// [i * 2^32, (i+1) * 2^32), so results are independent of worker count.
DatasetEvaluation evaluate_dataset(const BaseClassifier& classifier, const Dataset& ds,
                                   const SmoothingConfig& config,
                                   const std::vector<ThreatModel>& threat_grid,
                                   const CertifyParams& params, std::uint64_t seed);

}  // namespace hrs
