#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hrs/config.hpp"

namespace hrs {

// Per-class vote tally from a sampling round. Immutable; the total is fixed
// at construction and always equals the sum of the per-class counts.
class VoteCounts {
 public:
  explicit VoteCounts(std::vector<std::uint64_t> counts);

  const std::vector<std::uint64_t>& counts() const { return counts_; }
  std::uint64_t n() const { return n_; }
  std::size_t n_classes() const { return counts_.size(); }

  // Ties break toward the lowest class index.
  std::size_t top_class() const;
  std::size_t second_class() const;

  VoteCounts merged(const VoteCounts& other) const;

  bool operator==(const VoteCounts& other) const = default;

 private:
  std::vector<std::uint64_t> counts_;
  std::uint64_t n_;
};

struct GridVerdict {
  ThreatModel threat;
  bool certified = false;
};

// Distinguished value for a certified radius with no finite limit.
inline constexpr double kUnboundedRadius = std::numeric_limits<double>::infinity();

// Outcome of certifying one input. ABSTAIN is a first-class outcome
// (predicted is empty), never an error. delta and max_epsilon refer to the
// maximal radius in the verdict grid.
struct CertificateRecord {
  std::string sample_id;
  std::optional<int> predicted;          // empty -> ABSTAIN
  double p_lower = 0.0;                  // lower confidence bound on the top class
  std::optional<double> p_upper_runner;  // upper bound on the runner-up (multi-class mode)
  double delta = 0.0;
  std::vector<GridVerdict> verdicts;
  std::optional<double> max_epsilon;     // kUnboundedRadius -> no finite limit

  bool abstained() const { return !predicted.has_value(); }
};

std::string record_to_json(const CertificateRecord& rec);
CertificateRecord record_from_json(const std::string& line);

}  // namespace hrs
