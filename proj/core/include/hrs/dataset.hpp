#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "hrs/matrix.hpp"

namespace hrs {

// Raised for unreadable or malformed input data (as opposed to bad
// configuration). CLI maps this to its data-error exit code.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LabeledSample {
  std::string id;
  int label = 0;
  FeatureMatrix x;
};

struct Dataset {
  std::vector<LabeledSample> samples;

  std::size_t size() const { return samples.size(); }
  // One past the largest label.
  int n_classes() const;
};

// Newline-delimited JSON, one sample per line:
//   {"id": "...", "label": 0, "n_rows": 2, "n_cols": 3,
//    "domain": "binary", "values": [row-major numbers]}
// Serialization round-trips values bit-exactly.
Dataset parse_dataset_jsonl(std::istream& in, const std::string& source_name = "<stream>");
void write_dataset_jsonl(const Dataset& ds, std::ostream& out);

Dataset load_dataset_jsonl(const std::string& path);
void save_dataset_jsonl(const Dataset& ds, const std::string& path);

}  // namespace hrs
