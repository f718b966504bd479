#include "hrs/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <unordered_set>

#include "hrs/rng.hpp"

namespace hrs {

namespace {

constexpr std::uint64_t kParamDrawStream = 0xA11CE;

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBull;
  x ^= x >> 31;
  return x;
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

std::string fmt_param(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double uniform_in(RngStream& rng, const SweepRange& range, const char* name) {
  if (range.empty()) {
    throw std::invalid_argument(std::string("sweep: empty range for ") + name);
  }
  const double lo = range.lo();
  const double hi = range.hi();
  return lo + (hi - lo) * rng.next_unit();
}

// Lower-level settings the grid crosses with the selection probability.
std::vector<TrialParams> lower_grid(const SweepSpec& spec, Domain domain) {
  std::vector<TrialParams> out;
  if (domain == Domain::Real) {
    for (double s : spec.sigma_range.values) {
      TrialParams t;
      t.sigma = s;
      out.push_back(t);
    }
  } else {
    for (double pp : spec.p_plus_range.values) {
      for (double pm : spec.p_minus_range.values) {
        TrialParams t;
        t.p_plus = pp;
        t.p_minus = pm;
        out.push_back(t);
      }
    }
  }
  return out;
}

TrialParams draw_lower(RngStream& rng, const SweepSpec& spec, Domain domain) {
  TrialParams t;
  if (domain == Domain::Real) {
    t.sigma = uniform_in(rng, spec.sigma_range, "sigma");
  } else {
    t.p_plus = uniform_in(rng, spec.p_plus_range, "p_plus");
    t.p_minus = uniform_in(rng, spec.p_minus_range, "p_minus");
  }
  return t;
}

}  // namespace

std::string to_string(SweepMethod m) {
  switch (m) {
    case SweepMethod::Hierarchical:
      return "hierarchical";
    case SweepMethod::LowerOnly:
      return "lower-only";
    case SweepMethod::AblationOnly:
      return "ablation-only";
  }
  throw std::invalid_argument("unknown sweep method");
}

SweepMethod sweep_method_from_string(const std::string& s) {
  if (s == "hierarchical") {
    return SweepMethod::Hierarchical;
  }
  if (s == "lower-only") {
    return SweepMethod::LowerOnly;
  }
  if (s == "ablation-only") {
    return SweepMethod::AblationOnly;
  }
  throw std::invalid_argument("unknown sweep method: " + s);
}

double SweepRange::lo() const {
  if (values.empty()) {
    throw std::invalid_argument("sweep range is empty");
  }
  return *std::min_element(values.begin(), values.end());
}

double SweepRange::hi() const {
  if (values.empty()) {
    throw std::invalid_argument("sweep range is empty");
  }
  return *std::max_element(values.begin(), values.end());
}

std::string canonical_params(const TrialParams& params) {
  std::string s = "p=" + fmt_param(params.p);
  if (params.ablation) {
    s += "|ablation";
  } else if (params.sigma.has_value()) {
    s += "|sigma=" + fmt_param(*params.sigma);
  } else if (params.p_plus.has_value() && params.p_minus.has_value()) {
    s += "|pp=" + fmt_param(*params.p_plus) + "|pm=" + fmt_param(*params.p_minus);
  } else {
    throw std::invalid_argument("trial parameters specify no lower level");
  }
  return s;
}

std::uint64_t trial_seed(std::uint64_t sweep_seed, const TrialParams& params) {
  return mix64(fnv1a64(canonical_params(params)) ^ mix64(sweep_seed));
}

std::vector<SweepTrial> enumerate_trials(const SweepSpec& spec, Domain domain) {
  std::vector<SweepTrial> trials;
  auto add = [&](TrialParams params) {
    trials.push_back(SweepTrial{trials.size(), spec.method, std::move(params)});
  };

  if (spec.sampling == SweepSampling::Grid) {
    switch (spec.method) {
      case SweepMethod::Hierarchical: {
        const std::vector<TrialParams> lowers = lower_grid(spec, domain);
        for (double p : spec.p_range.values) {
          for (TrialParams t : lowers) {
            t.p = p;
            add(t);
          }
        }
        for (double p : spec.p_range.values) {
          TrialParams t;
          t.p = p;
          t.ablation = true;
          add(t);
        }
        break;
      }
      case SweepMethod::LowerOnly: {
        for (TrialParams t : lower_grid(spec, domain)) {
          t.p = 1.0;
          add(t);
        }
        break;
      }
      case SweepMethod::AblationOnly: {
        for (double p : spec.p_range.values) {
          TrialParams t;
          t.p = p;
          t.ablation = true;
          add(t);
        }
        break;
      }
    }
    return trials;
  }

  // Uniform random draws stay within each axis's [lo, hi] span. Only the
  // continuous arms are sampled; the ablation arm has no free lower-level
  // parameter, so hierarchical random sweeps cover it via AblationOnly.
  RngStream rng(spec.seed, kParamDrawStream);
  for (std::size_t i = 0; i < spec.n_trials; ++i) {
    TrialParams t;
    switch (spec.method) {
      case SweepMethod::Hierarchical:
        t = draw_lower(rng, spec, domain);
        t.p = uniform_in(rng, spec.p_range, "p");
        break;
      case SweepMethod::LowerOnly:
        t = draw_lower(rng, spec, domain);
        t.p = 1.0;
        break;
      case SweepMethod::AblationOnly:
        t.p = uniform_in(rng, spec.p_range, "p");
        t.ablation = true;
        break;
    }
    add(t);
  }
  return trials;
}

SmoothingConfig config_for_trial(const TrialParams& params, Domain domain) {
  SmoothingConfig config;
  config.selection = UniformSelection{params.p};
  if (params.ablation) {
    config.lower = AblationNoise{};
  } else if (params.sigma.has_value()) {
    if (domain != Domain::Real) {
      throw std::invalid_argument("gaussian lower level needs real-valued data");
    }
    config.lower = GaussianNoise{*params.sigma};
  } else if (params.p_plus.has_value() && params.p_minus.has_value()) {
    if (domain != Domain::Binary) {
      throw std::invalid_argument("sparse-flip lower level needs binary data");
    }
    config.lower = SparseFlipNoise{*params.p_plus, *params.p_minus};
  } else {
    throw std::invalid_argument("trial parameters specify no lower level");
  }
  validate_config(config);
  return config;
}

std::vector<ParetoPoint> run_sweep(const BaseClassifier& classifier, const Dataset& ds,
                                   const SweepSpec& spec,
                                   const std::vector<std::size_t>& skip, const TrialSink& sink) {
  if (ds.samples.empty()) {
    throw std::invalid_argument("sweep: empty dataset");
  }
  if (spec.repeats == 0) {
    throw std::invalid_argument("sweep: repeats must be positive");
  }
  const Domain domain = ds.samples.front().x.domain();
  const std::vector<SweepTrial> trials = enumerate_trials(spec, domain);

  const std::unordered_set<std::size_t> skipped(skip.begin(), skip.end());
  std::vector<const SweepTrial*> todo;
  for (const SweepTrial& t : trials) {
    if (!skipped.count(t.trial_id)) {
      todo.push_back(&t);
    }
  }

  std::vector<std::optional<ParetoPoint>> slots(trials.size());
  std::mutex sink_mu;

  // One running trial gets all workers for its own sampling; several share
  // them one trial per worker. Results land in per-trial slots, so the
  // schedule cannot affect the output.
  const int outer =
      todo.size() > 1 ? static_cast<int>(std::min<std::size_t>(spec.certify.workers, todo.size()))
                      : 1;
  CertifyParams certify = spec.certify;
  certify.workers = todo.size() > 1 ? 1 : spec.certify.workers;

  auto eval_trial = [&](const SweepTrial& trial) {
    const SmoothingConfig config = config_for_trial(trial.params, domain);
    const std::uint64_t tseed = trial_seed(spec.seed, trial.params);
    double clean_sum = 0.0;
    double cert_sum = 0.0;
    for (std::size_t k = 0; k < spec.repeats; ++k) {
      const std::uint64_t eval_seed = mix64(tseed + 0x9E3779B97F4A7C15ull * k);
      const DatasetEvaluation eval =
          evaluate_dataset(classifier, ds, config, spec.threat_grid, certify, eval_seed);
      clean_sum += eval.clean_accuracy;
      cert_sum += eval.certified_accuracy.empty() ? 0.0 : eval.certified_accuracy.back();
    }
    ParetoPoint point;
    point.trial_id = trial.trial_id;
    point.method = trial.method;
    point.params = trial.params;
    point.clean_accuracy = clean_sum / static_cast<double>(spec.repeats);
    point.certified_accuracy = cert_sum / static_cast<double>(spec.repeats);
    slots[trial.trial_id] = point;
    if (sink) {
      std::lock_guard<std::mutex> lock(sink_mu);
      sink(point);
    }
  };

  if (outer <= 1) {
    for (const SweepTrial* t : todo) {
      eval_trial(*t);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::mutex err_mu;
    std::size_t failed_at = trials.size();
    std::exception_ptr error;
    std::vector<std::thread> threads;
    for (int w = 0; w < outer; ++w) {
      threads.emplace_back([&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= todo.size()) {
            return;
          }
          try {
            eval_trial(*todo[i]);
          } catch (...) {
            std::lock_guard<std::mutex> lock(err_mu);
            if (todo[i]->trial_id < failed_at) {
              failed_at = todo[i]->trial_id;
              error = std::current_exception();
            }
          }
        }
      });
    }
    for (std::thread& t : threads) {
      t.join();
    }
    if (error) {
      std::rethrow_exception(error);
    }
  }

  std::vector<ParetoPoint> out;
  for (std::optional<ParetoPoint>& slot : slots) {
    if (slot.has_value()) {
      out.push_back(std::move(*slot));
    }
  }
  return out;
}

void mark_dominated(std::vector<ParetoPoint>& points) {
  for (ParetoPoint& a : points) {
    a.dominated = false;
    for (const ParetoPoint& b : points) {
      const bool weakly = b.clean_accuracy >= a.clean_accuracy &&
                          b.certified_accuracy >= a.certified_accuracy;
      const bool strictly = b.clean_accuracy > a.clean_accuracy ||
                            b.certified_accuracy > a.certified_accuracy;
      if (weakly && strictly) {
        a.dominated = true;
        break;
      }
    }
  }
}

std::vector<ParetoPoint> pareto_front(std::vector<ParetoPoint> points) {
  mark_dominated(points);
  std::vector<ParetoPoint> front;
  for (const ParetoPoint& p : points) {
    if (!p.dominated) {
      front.push_back(p);
    }
  }
  std::stable_sort(front.begin(), front.end(),
                   [](const ParetoPoint& a, const ParetoPoint& b) {
                     return a.clean_accuracy > b.clean_accuracy;
                   });
  return front;
}

}  // namespace hrs
