#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace hrs {

enum class Domain { Binary, Real };

std::string to_string(Domain d);
Domain domain_from_string(const std::string& s);

// Dense row-major matrix of row-structured input data. Rows are the objects an
// adversary may perturb (nodes, set elements, patches); columns are per-row
// features. Immutable after construction; Binary matrices only hold 0.0/1.0.
class FeatureMatrix {
 public:
  FeatureMatrix(std::size_t n_rows, std::size_t n_cols, Domain domain,
                std::vector<double> values);

  static FeatureMatrix zeros(std::size_t n_rows, std::size_t n_cols, Domain domain);

  std::size_t n_rows() const { return n_rows_; }
  std::size_t n_cols() const { return n_cols_; }
  Domain domain() const { return domain_; }

  double at(std::size_t row, std::size_t col) const;
  const std::vector<double>& values() const { return values_; }

  // Returns a copy with one cell replaced.
  FeatureMatrix with_cell(std::size_t row, std::size_t col, double value) const;

  bool operator==(const FeatureMatrix& other) const = default;

 private:
  std::size_t n_rows_;
  std::size_t n_cols_;
  Domain domain_;
  std::vector<double> values_;
};

// A feature matrix with the per-row selection indicator appended. Classifiers
// consume this form; the indicator is exposed as one extra column so that a
// fully hidden (ablated) row is representable outside the data domain.
class ExtendedMatrix {
 public:
  ExtendedMatrix(FeatureMatrix base, std::vector<std::uint8_t> indicator);

  const FeatureMatrix& base() const { return base_; }
  const std::vector<std::uint8_t>& indicator() const { return indicator_; }

  std::size_t n_rows() const { return base_.n_rows(); }
  // Base columns plus the indicator column.
  std::size_t n_cols() const { return base_.n_cols() + 1; }

  // col == base().n_cols() addresses the indicator column.
  double at(std::size_t row, std::size_t col) const;

  bool operator==(const ExtendedMatrix& other) const = default;

 private:
  FeatureMatrix base_;
  std::vector<std::uint8_t> indicator_;
};

ExtendedMatrix extend(const FeatureMatrix& x, const std::vector<std::uint8_t>& tau);
std::pair<FeatureMatrix, std::vector<std::uint8_t>> split(const ExtendedMatrix& z);

struct RowDistance {
  std::size_t changed_rows = 0;
  double frobenius = 0.0;
};

// Number of rows that differ in any cell, plus the Frobenius norm of the
// elementwise difference. Requires identical shape and domain.
RowDistance row_distance(const FeatureMatrix& a, const FeatureMatrix& b);

struct FlipCounts {
  std::size_t additions = 0;  // cells 0 -> 1
  std::size_t deletions = 0;  // cells 1 -> 0
};

// Binary matrices only.
FlipCounts flip_counts(const FeatureMatrix& a, const FeatureMatrix& b);

std::vector<std::size_t> changed_row_set(const FeatureMatrix& a, const FeatureMatrix& b);

}  // namespace hrs
