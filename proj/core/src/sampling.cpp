#include "hrs/sampling.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>

#include "hrs/classifier.hpp"

namespace hrs {

std::vector<std::uint8_t> sample_tau(const Selection& sel, std::size_t n_rows, RngStream& rng) {
  std::vector<std::uint8_t> tau(n_rows, 0);
  if (const auto* u = std::get_if<UniformSelection>(&sel)) {
    for (std::size_t i = 0; i < n_rows; ++i) {
      tau[i] = rng.next_bernoulli(u->p) ? 1 : 0;
    }
  } else {
    const auto& pr = std::get<PerRowSelection>(sel);
    if (pr.ps.size() != n_rows) {
      throw std::invalid_argument("per-row selection length must match row count");
    }
    for (std::size_t i = 0; i < n_rows; ++i) {
      tau[i] = rng.next_bernoulli(pr.ps[i]) ? 1 : 0;
    }
  }
  return tau;
}

ExtendedMatrix apply_lower_noise(const FeatureMatrix& x, const std::vector<std::uint8_t>& tau,
                                 const LowerNoise& lower, RngStream& rng) {
  if (tau.size() != x.n_rows()) {
    throw std::invalid_argument("indicator length must match row count");
  }
  std::vector<double> values = x.values();
  const std::size_t d = x.n_cols();

  if (const auto* g = std::get_if<GaussianNoise>(&lower)) {
    if (x.domain() != Domain::Real) {
      throw std::invalid_argument("gaussian noise requires real-valued data");
    }
    for (std::size_t i = 0; i < x.n_rows(); ++i) {
      if (!tau[i]) continue;
      for (std::size_t j = 0; j < d; ++j) {
        values[i * d + j] += g->sigma * rng.next_gaussian();
      }
    }
  } else if (const auto* s = std::get_if<SparseFlipNoise>(&lower)) {
    if (x.domain() != Domain::Binary) {
      throw std::invalid_argument("sparse flip noise requires binary data");
    }
    for (std::size_t i = 0; i < x.n_rows(); ++i) {
      if (!tau[i]) continue;
      for (std::size_t j = 0; j < d; ++j) {
        double& v = values[i * d + j];
        if (v == 0.0) {
          if (rng.next_bernoulli(s->p_plus)) v = 1.0;
        } else {
          if (rng.next_bernoulli(s->p_minus)) v = 0.0;
        }
      }
    }
  } else {
    for (std::size_t i = 0; i < x.n_rows(); ++i) {
      if (!tau[i]) continue;
      for (std::size_t j = 0; j < d; ++j) values[i * d + j] = 0.0;
    }
  }

  return ExtendedMatrix(FeatureMatrix(x.n_rows(), x.n_cols(), x.domain(), std::move(values)),
                        tau);
}

namespace {

struct DrawFailure {
  std::size_t draw_index;
  std::string message;
};

void run_range(const BaseClassifier& classifier, const FeatureMatrix& x,
               const SmoothingConfig& config, const RngKey& base, std::size_t begin,
               std::size_t end, std::vector<std::uint64_t>& counts,
               std::optional<DrawFailure>& failure) {
  for (std::size_t k = begin; k < end; ++k) {
    try {
      RngStream rng = base.offset(k).make();
      const auto tau = sample_tau(config.selection, x.n_rows(), rng);
      const ExtendedMatrix z = apply_lower_noise(x, tau, config.lower, rng);
      const int cls = classifier.classify(z);
      if (cls < 0 || cls >= classifier.n_classes()) {
        throw std::runtime_error("classifier returned class " + std::to_string(cls) +
                                 " outside [0, " + std::to_string(classifier.n_classes()) + ")");
      }
      ++counts[static_cast<std::size_t>(cls)];
    } catch (const std::exception& e) {
      failure = DrawFailure{k, e.what()};
      return;
    }
  }
}

}  // namespace

VoteCounts sample_under_noise(const BaseClassifier& classifier, const FeatureMatrix& x,
                              const SmoothingConfig& config, std::size_t n, const RngKey& base,
                              int workers) {
  const int n_classes = classifier.n_classes();
  if (n_classes < 1) {
    throw std::invalid_argument("classifier must expose at least one class");
  }
  validate_config(config);

  const std::size_t w =
      std::clamp<std::size_t>(workers < 1 ? 1 : static_cast<std::size_t>(workers), 1,
                              n == 0 ? 1 : n);
  std::vector<std::vector<std::uint64_t>> counts(
      w, std::vector<std::uint64_t>(static_cast<std::size_t>(n_classes), 0));
  std::vector<std::optional<DrawFailure>> failures(w);

  if (w == 1) {
    run_range(classifier, x, config, base, 0, n, counts[0], failures[0]);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(w);
    const std::size_t chunk = (n + w - 1) / w;
    for (std::size_t t = 0; t < w; ++t) {
      const std::size_t begin = t * chunk;
      const std::size_t end = std::min(n, begin + chunk);
      threads.emplace_back([&, t, begin, end] {
        run_range(classifier, x, config, base, begin, end, counts[t], failures[t]);
      });
    }
    for (auto& th : threads) th.join();
  }

  // Report the earliest failing draw regardless of worker count.
  std::optional<DrawFailure> first;
  for (const auto& f : failures) {
    if (f && (!first || f->draw_index < first->draw_index)) first = f;
  }
  if (first) {
    throw std::runtime_error("sampling draw " + std::to_string(first->draw_index) +
                             " failed: " + first->message);
  }

  std::vector<std::uint64_t> total(static_cast<std::size_t>(n_classes), 0);
  for (const auto& c : counts) {
    for (std::size_t i = 0; i < total.size(); ++i) total[i] += c[i];
  }
  return VoteCounts(std::move(total));
}

}  // namespace hrs
