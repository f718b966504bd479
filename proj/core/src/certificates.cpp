#include "hrs/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hrs/stats.hpp"

namespace hrs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMassSumTol = 1e-9;
constexpr double kRatioMergeTol = 1e-12;

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

// k * log(p) with the 0 * log(0) = 0 convention.
double xlogy(std::size_t k, double p) {
  if (k == 0) return 0.0;
  return static_cast<double>(k) * std::log(p);
}

double log_sum_exp(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

bool same_ratio(double a, double b) {
  if (a == b) return true;  // covers equal infinities
  if (std::isinf(a) || std::isinf(b)) return false;
  return std::fabs(a - b) <= kRatioMergeTol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

}  // namespace

RegionTable::RegionTable(std::vector<Region> regions) {
  std::vector<Region> live;
  live.reserve(regions.size());
  for (const Region& r : regions) {
    if (r.log_mass_clean == -kInf && r.log_mass_perturbed == -kInf) continue;
    if (std::isnan(r.log_ratio) || std::isnan(r.log_mass_clean) ||
        std::isnan(r.log_mass_perturbed)) {
      throw std::invalid_argument("region table entries must not be NaN");
    }
    if (r.log_mass_clean > 1e-12 || r.log_mass_perturbed > 1e-12) {
      throw std::invalid_argument("region masses cannot exceed 1");
    }
    live.push_back(r);
  }
  std::sort(live.begin(), live.end(),
            [](const Region& a, const Region& b) { return a.log_ratio > b.log_ratio; });

  for (const Region& r : live) {
    if (!regions_.empty() && same_ratio(regions_.back().log_ratio, r.log_ratio)) {
      Region& back = regions_.back();
      back.log_mass_clean = log_sum_exp(back.log_mass_clean, r.log_mass_clean);
      back.log_mass_perturbed = log_sum_exp(back.log_mass_perturbed, r.log_mass_perturbed);
    } else {
      regions_.push_back(r);
    }
  }

  double sum_clean = 0.0;
  double sum_pert = 0.0;
  for (const Region& r : regions_) {
    sum_clean += std::exp(r.log_mass_clean);
    sum_pert += std::exp(r.log_mass_perturbed);
  }
  if (std::fabs(sum_clean - 1.0) > kMassSumTol || std::fabs(sum_pert - 1.0) > kMassSumTol) {
    throw std::invalid_argument("region masses must sum to 1 under both distributions");
  }
}

DeltaValue delta_uniform(double p, std::size_t r) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("selection probability must be in [0, 1]");
  }
  if (r == 0) return DeltaValue{0.0, 0};
  return DeltaValue{1.0 - std::pow(p, static_cast<double>(r)), r};
}

DeltaValue delta_nonuniform(const std::vector<double>& ps, std::size_t r) {
  if (r == 0) return DeltaValue{0.0, 0};
  if (r > ps.size()) {
    throw std::invalid_argument("radius exceeds number of per-row probabilities");
  }
  std::vector<double> sorted = ps;
  for (double p : sorted) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::invalid_argument("selection probability must be in [0, 1]");
    }
  }
  std::sort(sorted.begin(), sorted.end());
  double prod = 1.0;
  for (std::size_t i = 0; i < r; ++i) prod *= sorted[i];
  return DeltaValue{1.0 - prod, r};
}

DeltaValue delta_for(const Selection& sel, std::size_t r) {
  if (const auto* u = std::get_if<UniformSelection>(&sel)) {
    return delta_uniform(u->p, r);
  }
  return delta_nonuniform(std::get<PerRowSelection>(sel).ps, r);
}

double delta_keep_subset(std::size_t n_rows, std::size_t k_keep, std::size_t r) {
  if (k_keep > n_rows) {
    throw std::invalid_argument("cannot keep more rows than exist");
  }
  if (r == 0) return 0.0;
  if (k_keep > n_rows - r) return 1.0;  // every size-k subset hits a target row
  const double log_ratio = log_binomial(n_rows - r, k_keep) - log_binomial(n_rows, k_keep);
  return 1.0 - std::exp(log_ratio);
}

namespace {

void check_sigma(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("sigma must be positive and finite");
  }
}

void check_epsilon(double epsilon) {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("epsilon must be non-negative and finite");
  }
}

void check_delta(double delta) {
  if (!(delta >= 0.0 && delta <= 1.0)) {
    throw std::invalid_argument("delta must be in [0, 1]");
  }
}

}  // namespace

double gaussian_lower_bound(double p, double epsilon, double sigma) {
  check_sigma(sigma);
  check_epsilon(epsilon);
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  return std_normal_cdf(std_normal_quantile(p) - epsilon / sigma);
}

double gaussian_upper_bound(double p, double epsilon, double sigma) {
  check_sigma(sigma);
  check_epsilon(epsilon);
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  return std_normal_cdf(std_normal_quantile(p) + epsilon / sigma);
}

double hier_gaussian_lower(double p, double epsilon, double sigma, double delta) {
  check_sigma(sigma);
  check_epsilon(epsilon);
  check_delta(delta);
  if (delta >= 1.0) return 0.0;
  const double budget = (p - delta) / (1.0 - delta);
  if (budget <= 0.0) return 0.0;
  if (budget >= 1.0) return 1.0 - delta;
  return std_normal_cdf(std_normal_quantile(budget) - epsilon / sigma) * (1.0 - delta);
}

double hier_gaussian_upper(double p, double epsilon, double sigma, double delta) {
  check_sigma(sigma);
  check_epsilon(epsilon);
  check_delta(delta);
  if (delta >= 1.0) return 1.0;
  const double budget = p / (1.0 - delta);
  if (budget >= 1.0) return 1.0;
  if (budget <= 0.0) return delta;
  return std_normal_cdf(std_normal_quantile(budget) + epsilon / sigma) * (1.0 - delta) + delta;
}

double hier_gaussian_max_radius(double p, double sigma, double delta) {
  check_sigma(sigma);
  check_delta(delta);
  if (delta >= 0.5) return 0.0;
  const double budget = (p - delta) / (1.0 - delta);
  const double floor_q = 1.0 / (2.0 * (1.0 - delta));  // in [0.5, 1) here
  if (budget <= floor_q) return 0.0;
  if (budget >= 1.0) return kUnboundedRadius;
  return sigma * (std_normal_quantile(budget) - std_normal_quantile(floor_q));
}

RegionTable sparse_regions(std::size_t r_add, std::size_t r_del, double p_plus, double p_minus) {
  if (!(p_plus >= 0.0 && p_plus < 1.0)) {
    throw std::invalid_argument("p_plus must be in [0, 1)");
  }
  if (!(p_minus > 0.0 && p_minus <= 1.0)) {
    throw std::invalid_argument("p_minus must be in (0, 1]");
  }
  std::vector<Region> regions;
  regions.reserve((r_add + 1) * (r_del + 1));
  // Index regions by how many adversarially added cells the smoothed sample
  // keeps at 1 (a) and how many adversarially deleted cells it keeps at 0 (b).
  for (std::size_t a = 0; a <= r_add; ++a) {
    for (std::size_t b = 0; b <= r_del; ++b) {
      const double log_choose =
          log_binomial(r_add, a) + log_binomial(r_del, b);
      const double log_clean = log_choose + xlogy(a, p_plus) + xlogy(r_add - a, 1.0 - p_plus) +
                               xlogy(b, p_minus) + xlogy(r_del - b, 1.0 - p_minus);
      const double log_pert = log_choose + xlogy(a, 1.0 - p_minus) + xlogy(r_add - a, p_minus) +
                              xlogy(b, 1.0 - p_plus) + xlogy(r_del - b, p_plus);
      if (log_clean == -kInf && log_pert == -kInf) continue;
      double log_ratio;
      if (log_clean == -kInf) {
        log_ratio = -kInf;
      } else if (log_pert == -kInf) {
        log_ratio = kInf;
      } else {
        log_ratio = log_clean - log_pert;
      }
      regions.push_back(Region{log_ratio, log_clean, log_pert});
    }
  }
  return RegionTable(std::move(regions));
}

double discrete_lp_lower(const RegionTable& table, double budget) {
  double remaining = clamp01(budget);
  double acc = 0.0;
  // Spend clean mass where the clean/perturbed ratio is largest; regions
  // with no clean mass never help meet the budget and are skipped.
  for (const Region& r : table.regions()) {
    if (remaining <= 0.0) break;
    const double nu = std::exp(r.log_mass_clean);
    if (nu <= 0.0) continue;
    const double nu_t = std::exp(r.log_mass_perturbed);
    const double take = std::min(remaining, nu);
    acc += nu_t * (take / nu);
    remaining -= take;
  }
  return std::min(acc, 1.0);
}

double discrete_lp_upper(const RegionTable& table, double budget) {
  double remaining = clamp01(budget);
  double acc = 0.0;
  // Collect perturbed mass where it is cheapest in clean mass; regions with
  // no clean mass are free.
  const auto& regions = table.regions();
  for (auto it = regions.rbegin(); it != regions.rend(); ++it) {
    const double nu = std::exp(it->log_mass_clean);
    const double nu_t = std::exp(it->log_mass_perturbed);
    if (nu <= 0.0) {
      acc += nu_t;
      continue;
    }
    if (remaining <= 0.0) break;
    const double take = std::min(remaining, nu);
    acc += nu_t * (take / nu);
    remaining -= take;
  }
  return std::min(acc, 1.0);
}

double hier_discrete_lower(double p, double delta, const RegionTable& table) {
  check_delta(delta);
  if (delta >= 1.0) return 0.0;
  const double budget = clamp01((p - delta) / (1.0 - delta));
  if (budget <= 0.0) return 0.0;
  return discrete_lp_lower(table, budget) * (1.0 - delta);
}

double hier_discrete_upper(double p, double delta, const RegionTable& table) {
  check_delta(delta);
  if (delta >= 1.0) return 1.0;
  const double budget = clamp01(p / (1.0 - delta));
  return std::min(1.0, discrete_lp_upper(table, budget) * (1.0 - delta) + delta);
}

double ablation_lower(double p, double delta) {
  check_delta(delta);
  return std::max(p - delta, 0.0);
}

double ablation_upper(double p, double delta) {
  check_delta(delta);
  return std::min(p + delta, 1.0);
}

BallCertificate certify_ball(double p_lower, std::optional<double> p_upper_runner,
                             const SmoothingConfig& config, const ThreatModel& threat) {
  validate_config(config);
  validate_threat(threat);
  const double delta = delta_for(config.selection, threat_rows(threat)).delta;

  BallCertificate out;
  if (const auto* g = std::get_if<GaussianNoise>(&config.lower)) {
    const auto* l2 = std::get_if<ContinuousL2>(&threat);
    if (l2 == nullptr) {
      throw std::invalid_argument("gaussian noise certifies L2 threats only");
    }
    if (p_upper_runner.has_value()) {
      out.certified = hier_gaussian_lower(p_lower, l2->epsilon, g->sigma, delta) >
                      hier_gaussian_upper(*p_upper_runner, l2->epsilon, g->sigma, delta);
    } else {
      out.certified = hier_gaussian_lower(p_lower, l2->epsilon, g->sigma, delta) > 0.5;
      out.max_epsilon = hier_gaussian_max_radius(p_lower, g->sigma, delta);
    }
  } else if (const auto* s = std::get_if<SparseFlipNoise>(&config.lower)) {
    const auto* flip = std::get_if<DiscreteFlip>(&threat);
    if (flip == nullptr) {
      throw std::invalid_argument("sparse flip noise certifies flip threats only");
    }
    const RegionTable table = sparse_regions(flip->r_add, flip->r_del, s->p_plus, s->p_minus);
    if (p_upper_runner.has_value()) {
      out.certified = hier_discrete_lower(p_lower, delta, table) >
                      hier_discrete_upper(*p_upper_runner, delta, table);
    } else {
      out.certified = hier_discrete_lower(p_lower, delta, table) > 0.5;
    }
  } else {
    if (p_upper_runner.has_value()) {
      out.certified = ablation_lower(p_lower, delta) > ablation_upper(*p_upper_runner, delta);
    } else {
      out.certified = ablation_lower(p_lower, delta) > 0.5;
    }
  }
  return out;
}

}  // namespace hrs
