#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hrs/config.hpp"
#include "hrs/matrix.hpp"
#include "hrs/record.hpp"
#include "hrs/rng.hpp"

namespace hrs {

class BaseClassifier;

// Draws the per-row selection indicator; consumes one draw per row.
std::vector<std::uint8_t> sample_tau(const Selection& sel, std::size_t n_rows, RngStream& rng);

// Applies lower-level noise to the selected rows only. Unselected rows are
// bit-exact copies of the input. Draw order is fixed (rows ascending, cells
// ascending) so a given stream always produces the same matrix.
ExtendedMatrix apply_lower_noise(const FeatureMatrix& x, const std::vector<std::uint8_t>& tau,
                                 const LowerNoise& lower, RngStream& rng);

// Runs n independent smoothing draws through the classifier and tallies
// votes. Draw k uses stream base.offset(k), so the result is identical for
// any worker count and any scheduling; callers must reserve stream ids
// [base.stream, base.stream + n). Classifier failures propagate with the
// failing draw index attached.
VoteCounts sample_under_noise(const BaseClassifier& classifier, const FeatureMatrix& x,
                              const SmoothingConfig& config, std::size_t n, const RngKey& base,
                              int workers = 1);

}  // namespace hrs
