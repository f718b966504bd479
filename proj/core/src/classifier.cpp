#include "hrs/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "hrs/rng.hpp"
#include "hrs/stats.hpp"

namespace hrs {

Dataset make_synthetic_dataset(const SyntheticSpec& spec) {
  if (spec.n_classes < 2) {
    throw std::invalid_argument("synthetic dataset requires at least two classes");
  }
  if (spec.n_samples == 0) {
    throw std::invalid_argument("synthetic dataset requires at least one sample");
  }
  const double s = std::clamp(spec.class_separation, 0.0, 1.0);
  const std::size_t cells = spec.n_rows * spec.n_cols;

  // Per-class prototypes drawn from a reserved stream range.
  std::vector<std::vector<double>> prototypes;
  for (int c = 0; c < spec.n_classes; ++c) {
    RngStream rng(spec.seed, (std::uint64_t{1} << 62) + static_cast<std::uint64_t>(c));
    std::vector<double> proto(cells);
    if (spec.domain == Domain::Binary) {
      const double density =
          (static_cast<double>(c) + 1.0) / (static_cast<double>(spec.n_classes) + 1.0);
      for (double& v : proto) v = rng.next_bernoulli(density) ? 1.0 : 0.0;
    } else {
      const double mean = 3.0 * (static_cast<double>(c) / (spec.n_classes - 1.0) - 0.5);
      for (double& v : proto) v = mean + 0.25 * rng.next_gaussian();
    }
    prototypes.push_back(std::move(proto));
  }

  Dataset ds;
  ds.samples.reserve(spec.n_samples);
  for (std::size_t m = 0; m < spec.n_samples; ++m) {
    const int label = static_cast<int>(m % static_cast<std::size_t>(spec.n_classes));
    RngStream rng(spec.seed, m);
    std::vector<double> v = prototypes[static_cast<std::size_t>(label)];
    if (spec.domain == Domain::Binary) {
      const double flip = 0.5 * (1.0 - s);
      for (double& cell : v) {
        if (rng.next_bernoulli(flip)) cell = 1.0 - cell;
      }
    } else {
      for (double& cell : v) {
        // Separation scales the signal; the noise floor is fixed.
        cell = cell * s + rng.next_gaussian();
      }
    }
    std::ostringstream id;
    id << "syn-" << m;
    ds.samples.push_back(LabeledSample{
        id.str(), label, FeatureMatrix(spec.n_rows, spec.n_cols, spec.domain, std::move(v))});
  }
  return ds;
}

namespace {

using ParamMap = std::map<std::string, double>;

std::pair<std::string, ParamMap> parse_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  std::string name = spec.substr(0, colon);
  ParamMap params;
  if (colon != std::string::npos) {
    std::istringstream rest(spec.substr(colon + 1));
    std::string kv;
    while (std::getline(rest, kv, ',')) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) {
        throw std::invalid_argument("classifier parameter must be key=value: " + kv);
      }
      try {
        params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
      } catch (const std::exception&) {
        throw std::invalid_argument("bad classifier parameter value: " + kv);
      }
    }
  }
  return {std::move(name), std::move(params)};
}

double param_or(const ParamMap& params, const std::string& key, double fallback) {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

class ConstantClassifier final : public BaseClassifier {
 public:
  explicit ConstantClassifier(int k) : k_(k) {
    if (k < 0) throw std::invalid_argument("constant class must be non-negative");
  }
  int classify(const ExtendedMatrix&) const override { return k_; }
  int n_classes() const override { return std::max(2, k_ + 1); }

 private:
  int k_;
};

class FirstCellClassifier final : public BaseClassifier {
 public:
  int classify(const ExtendedMatrix& z) const override { return z.at(0, 0) > 0.5 ? 1 : 0; }
  int n_classes() const override { return 2; }
};

class IndicatorParityClassifier final : public BaseClassifier {
 public:
  int classify(const ExtendedMatrix& z) const override {
    std::uint64_t sum = 0;
    for (std::uint8_t t : z.indicator()) sum += t;
    return static_cast<int>(sum % 2);
  }
  int n_classes() const override { return 2; }
};

class RowSumThresholdClassifier final : public BaseClassifier {
 public:
  explicit RowSumThresholdClassifier(double t) : t_(t) {}
  int classify(const ExtendedMatrix& z) const override {
    double sum = 0.0;
    for (double v : z.base().values()) sum += v;
    return sum > t_ ? 1 : 0;
  }
  int n_classes() const override { return 2; }

 private:
  double t_;
};

// Votes class 1 iff Phi((z(0,0) - ref)/sigma) < q. Under Gaussian smoothing
// with matching sigma and ref = x(0,0), the vote probability is exactly q
// when row 0 is selected and [q > 1/2] when it is not, so the smoothed vote
// probability has an exact closed form: p*q + (1-p)*[q > 1/2].
class CoinClassifier final : public BaseClassifier {
 public:
  CoinClassifier(double q, double sigma, double ref) : q_(q), sigma_(sigma), ref_(ref) {
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("coin q must be in [0, 1]");
    if (!(sigma > 0.0)) throw std::invalid_argument("coin sigma must be positive");
  }
  int classify(const ExtendedMatrix& z) const override {
    return std_normal_cdf((z.at(0, 0) - ref_) / sigma_) < q_ ? 1 : 0;
  }
  int n_classes() const override { return 2; }

 private:
  double q_;
  double sigma_;
  double ref_;
};

class NearestCentroidClassifier final : public BaseClassifier {
 public:
  NearestCentroidClassifier(const Dataset& fit, bool use_indicator)
      : use_indicator_(use_indicator) {
    if (fit.samples.empty()) {
      throw std::invalid_argument("centroid classifier requires a non-empty fit dataset");
    }
    n_classes_ = std::max(2, fit.n_classes());
    const std::size_t n_rows = fit.samples.front().x.n_rows();
    centroids_.assign(static_cast<std::size_t>(n_classes_),
                      std::vector<double>(n_rows, 0.0));
    std::vector<std::size_t> counts(static_cast<std::size_t>(n_classes_), 0);
    for (const auto& s : fit.samples) {
      if (s.x.n_rows() != n_rows) {
        throw std::invalid_argument("centroid fit requires uniform row counts");
      }
      auto& c = centroids_[static_cast<std::size_t>(s.label)];
      for (std::size_t i = 0; i < n_rows; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < s.x.n_cols(); ++j) sum += s.x.at(i, j);
        c[i] += sum;  // clean samples carry an all-zero indicator
      }
      ++counts[static_cast<std::size_t>(s.label)];
    }
    for (std::size_t c = 0; c < centroids_.size(); ++c) {
      if (counts[c] == 0) continue;
      for (double& v : centroids_[c]) v /= static_cast<double>(counts[c]);
    }
  }

  int classify(const ExtendedMatrix& z) const override {
    const std::size_t n_rows = z.n_rows();
    std::vector<double> feat(n_rows, 0.0);
    for (std::size_t i = 0; i < n_rows; ++i) {
      double sum = 0.0;
      for (std::size_t j = 0; j < z.base().n_cols(); ++j) sum += z.base().at(i, j);
      if (use_indicator_) sum += static_cast<double>(z.indicator()[i]);
      feat[i] = sum;
    }
    int best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centroids_.size(); ++c) {
      if (centroids_[c].size() != n_rows) continue;
      double dist = 0.0;
      for (std::size_t i = 0; i < n_rows; ++i) {
        const double diff = feat[i] - centroids_[c][i];
        dist += diff * diff;
      }
      if (dist < best_dist) {
        best_dist = dist;
        best = static_cast<int>(c);
      }
    }
    return best;
  }

  int n_classes() const override { return n_classes_; }

 private:
  bool use_indicator_;
  int n_classes_ = 2;
  std::vector<std::vector<double>> centroids_;
};

}  // namespace

std::vector<std::string> builtin_classifier_names() {
  return {"constant",         "first_cell", "indicator_parity", "row_sum_threshold",
          "coin",             "centroid",   "centroid_ext"};
}

std::unique_ptr<BaseClassifier> make_builtin_classifier(const std::string& spec,
                                                        const Dataset* fit) {
  const auto [name, params] = parse_spec(spec);
  if (name == "constant") {
    return std::make_unique<ConstantClassifier>(
        static_cast<int>(param_or(params, "k", 0.0)));
  }
  if (name == "first_cell") return std::make_unique<FirstCellClassifier>();
  if (name == "indicator_parity") return std::make_unique<IndicatorParityClassifier>();
  if (name == "row_sum_threshold") {
    return std::make_unique<RowSumThresholdClassifier>(param_or(params, "t", 0.5));
  }
  if (name == "coin") {
    return std::make_unique<CoinClassifier>(param_or(params, "q", 0.5),
                                            param_or(params, "sigma", 1.0),
                                            param_or(params, "ref", 0.0));
  }
  if (name == "centroid" || name == "centroid_ext") {
    if (fit == nullptr) {
      throw std::invalid_argument("classifier " + name + " requires a fit dataset");
    }
    return std::make_unique<NearestCentroidClassifier>(*fit, name == "centroid_ext");
  }
  throw std::invalid_argument("unknown classifier: " + name);
}

}  // namespace hrs
