#include "hrs/matrix.hpp"

#include <cmath>
#include <stdexcept>

namespace hrs {

std::string to_string(Domain d) {
  return d == Domain::Binary ? "binary" : "real";
}

Domain domain_from_string(const std::string& s) {
  if (s == "binary") return Domain::Binary;
  if (s == "real") return Domain::Real;
  throw std::invalid_argument("unknown domain: " + s);
}

FeatureMatrix::FeatureMatrix(std::size_t n_rows, std::size_t n_cols, Domain domain,
                             std::vector<double> values)
    : n_rows_(n_rows), n_cols_(n_cols), domain_(domain), values_(std::move(values)) {
  if (n_rows_ == 0 || n_cols_ == 0) {
    throw std::invalid_argument("matrix must have at least one row and one column");
  }
  if (values_.size() != n_rows_ * n_cols_) {
    throw std::invalid_argument("matrix values size does not match dimensions");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("matrix values must be finite");
    }
    if (domain_ == Domain::Binary && v != 0.0 && v != 1.0) {
      throw std::invalid_argument("binary matrix values must be 0 or 1");
    }
  }
}

FeatureMatrix FeatureMatrix::zeros(std::size_t n_rows, std::size_t n_cols, Domain domain) {
  return FeatureMatrix(n_rows, n_cols, domain, std::vector<double>(n_rows * n_cols, 0.0));
}

double FeatureMatrix::at(std::size_t row, std::size_t col) const {
  if (row >= n_rows_ || col >= n_cols_) {
    throw std::out_of_range("matrix index out of range");
  }
  return values_[row * n_cols_ + col];
}

FeatureMatrix FeatureMatrix::with_cell(std::size_t row, std::size_t col, double value) const {
  if (row >= n_rows_ || col >= n_cols_) {
    throw std::out_of_range("matrix index out of range");
  }
  std::vector<double> v = values_;
  v[row * n_cols_ + col] = value;
  return FeatureMatrix(n_rows_, n_cols_, domain_, std::move(v));
}

ExtendedMatrix::ExtendedMatrix(FeatureMatrix base, std::vector<std::uint8_t> indicator)
    : base_(std::move(base)), indicator_(std::move(indicator)) {
  if (indicator_.size() != base_.n_rows()) {
    throw std::invalid_argument("indicator length must match row count");
  }
  for (std::uint8_t t : indicator_) {
    if (t > 1) throw std::invalid_argument("indicator entries must be 0 or 1");
  }
}

double ExtendedMatrix::at(std::size_t row, std::size_t col) const {
  if (row >= n_rows() || col >= n_cols()) {
    throw std::out_of_range("matrix index out of range");
  }
  if (col == base_.n_cols()) return static_cast<double>(indicator_[row]);
  return base_.at(row, col);
}

ExtendedMatrix extend(const FeatureMatrix& x, const std::vector<std::uint8_t>& tau) {
  return ExtendedMatrix(x, tau);
}

std::pair<FeatureMatrix, std::vector<std::uint8_t>> split(const ExtendedMatrix& z) {
  return {z.base(), z.indicator()};
}

namespace {

void require_same_shape(const FeatureMatrix& a, const FeatureMatrix& b) {
  if (a.n_rows() != b.n_rows() || a.n_cols() != b.n_cols() || a.domain() != b.domain()) {
    throw std::invalid_argument("matrices must share shape and domain");
  }
}

}  // namespace

RowDistance row_distance(const FeatureMatrix& a, const FeatureMatrix& b) {
  require_same_shape(a, b);
  RowDistance d;
  double sq = 0.0;
  for (std::size_t i = 0; i < a.n_rows(); ++i) {
    bool changed = false;
    for (std::size_t j = 0; j < a.n_cols(); ++j) {
      const double diff = a.at(i, j) - b.at(i, j);
      if (diff != 0.0) changed = true;
      sq += diff * diff;
    }
    if (changed) ++d.changed_rows;
  }
  d.frobenius = std::sqrt(sq);
  return d;
}

FlipCounts flip_counts(const FeatureMatrix& a, const FeatureMatrix& b) {
  require_same_shape(a, b);
  if (a.domain() != Domain::Binary) {
    throw std::invalid_argument("flip counts require binary matrices");
  }
  FlipCounts c;
  for (std::size_t k = 0; k < a.values().size(); ++k) {
    const double va = a.values()[k];
    const double vb = b.values()[k];
    if (va == 0.0 && vb == 1.0) ++c.additions;
    if (va == 1.0 && vb == 0.0) ++c.deletions;
  }
  return c;
}

std::vector<std::size_t> changed_row_set(const FeatureMatrix& a, const FeatureMatrix& b) {
  require_same_shape(a, b);
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < a.n_rows(); ++i) {
    for (std::size_t j = 0; j < a.n_cols(); ++j) {
      if (a.at(i, j) != b.at(i, j)) {
        rows.push_back(i);
        break;
      }
    }
  }
  return rows;
}

}  // namespace hrs
