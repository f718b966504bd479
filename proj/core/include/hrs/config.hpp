#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "hrs/matrix.hpp"

namespace hrs {

// Upper-level row selection: each row is kept for lower-level noising
// independently, with probability p (shared or per row).
struct UniformSelection {
  double p = 1.0;
};

struct PerRowSelection {
  std::vector<double> ps;
};

using Selection = std::variant<UniformSelection, PerRowSelection>;

// Lower-level noise applied to selected rows only.
struct GaussianNoise {
  double sigma = 1.0;  // > 0, Real domain
};

struct SparseFlipNoise {
  double p_plus = 0.0;   // 0 -> 1 flip probability, in [0, 1)
  double p_minus = 0.5;  // 1 -> 0 flip probability, in (0, 1]
};

// Selected rows are fully hidden: values zeroed, indicator column set.
struct AblationNoise {};

using LowerNoise = std::variant<GaussianNoise, SparseFlipNoise, AblationNoise>;

struct SmoothingConfig {
  Selection selection;
  LowerNoise lower;
};

// Adversary may rewrite up to r rows; within those rows the perturbation is
// bounded in L2 norm (continuous data) or by per-direction flip counts
// (binary data).
struct ContinuousL2 {
  std::size_t r = 1;
  double epsilon = 0.0;
};

struct DiscreteFlip {
  std::size_t r = 1;
  std::size_t r_add = 0;  // 0 -> 1 flips
  std::size_t r_del = 0;  // 1 -> 0 flips
};

using ThreatModel = std::variant<ContinuousL2, DiscreteFlip>;

std::size_t threat_rows(const ThreatModel& t);

// Compact human-readable form used for the radius_spec output column,
// e.g. "r=2;eps=0.5" or "r=1;ra=2;rd=1". Comma-free so CSV rows stay flat.
std::string threat_label(const ThreatModel& t);

void validate_config(const SmoothingConfig& c);
void validate_threat(const ThreatModel& t);

// Pairing rules between data domain, lower-level noise, and threat model:
// Gaussian noise and L2 threats pair with Real data, sparse flips and flip
// threats with Binary data, ablation with either. Throws on any mismatch,
// including dimension bounds (r <= n_rows, r_add + r_del <= r * n_cols,
// per-row selection length == n_rows).
void validate_compatible(Domain domain, const SmoothingConfig& c, const ThreatModel& t,
                         std::size_t n_rows, std::size_t n_cols);

}  // namespace hrs
