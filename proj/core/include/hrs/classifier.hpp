#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "hrs/dataset.hpp"
#include "hrs/matrix.hpp"

namespace hrs {

// Base classifier over extended matrices (data columns plus the selection
// indicator column). Implementations must be deterministic functions of the
// input and safe to call concurrently; stochastic behavior must be derived
// from the input itself, never from shared mutable state.
class BaseClassifier {
 public:
  virtual ~BaseClassifier() = default;
  virtual int classify(const ExtendedMatrix& z) const = 0;
  virtual int n_classes() const = 0;
};

struct SyntheticSpec {
  std::size_t n_samples = 100;
  std::size_t n_rows = 4;
  std::size_t n_cols = 3;
  Domain domain = Domain::Binary;
  int n_classes = 2;
  // 1 -> cleanly separable prototypes, 0 -> pure noise (chance accuracy).
  double class_separation = 1.0;
  std::uint64_t seed = 0;
};

// Class-conditional row prototypes with per-cell corruption. Deterministic
// given the seed; labels cycle round-robin.
Dataset make_synthetic_dataset(const SyntheticSpec& spec);

// Built-in classifier registry. Spec strings are "name" or
// "name:key=value,key=value":
//   constant:k=0                  always class k
//   first_cell                    class = [z(0,0) > 0.5]
//   indicator_parity              class = (sum of indicator) mod 2
//   row_sum_threshold:t=1.5       class = [sum of data cells > t]
//   coin:q=0.9,sigma=0.5,ref=0    class 1 iff Phi((z(0,0)-ref)/sigma) < q
//   centroid                      nearest centroid over per-row sums (data
//                                 columns only); fitted on a dataset
//   centroid_ext                  same, with the indicator column included
std::vector<std::string> builtin_classifier_names();
std::unique_ptr<BaseClassifier> make_builtin_classifier(const std::string& spec,
                                                        const Dataset* fit = nullptr);

}  // namespace hrs
