#include "hrs/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hrs/stats.hpp"

namespace hrs {
namespace oracle {

namespace {

double selection_prob(const Selection& sel, std::size_t row) {
  if (const auto* u = std::get_if<UniformSelection>(&sel)) return u->p;
  return std::get<PerRowSelection>(sel).ps[row];
}

// Probability that lower-level noise maps source row bits to target row bits.
double row_noise_prob(const LowerNoise& lower, const FeatureMatrix& src,
                      const std::vector<double>& target, std::size_t row, std::size_t d) {
  if (const auto* s = std::get_if<SparseFlipNoise>(&lower)) {
    double p = 1.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double from = src.at(row, j);
      const double to = target[row * d + j];
      if (from == 0.0) {
        p *= (to == 1.0) ? s->p_plus : 1.0 - s->p_plus;
      } else {
        p *= (to == 0.0) ? s->p_minus : 1.0 - s->p_minus;
      }
    }
    return p;
  }
  // Ablation: the row deterministically becomes the all-zero token.
  for (std::size_t j = 0; j < d; ++j) {
    if (target[row * d + j] != 0.0) return 0.0;
  }
  return 1.0;
}

bool row_equals(const FeatureMatrix& src, const std::vector<double>& target, std::size_t row,
                std::size_t d) {
  for (std::size_t j = 0; j < d; ++j) {
    if (target[row * d + j] != src.at(row, j)) return false;
  }
  return true;
}

}  // namespace

std::vector<OutcomeAtom> enumerate_outcomes(const FeatureMatrix& x,
                                            const FeatureMatrix& x_tilde,
                                            const SmoothingConfig& config) {
  if (x.domain() != Domain::Binary || x_tilde.domain() != Domain::Binary) {
    throw std::invalid_argument("outcome enumeration requires binary data");
  }
  if (x.n_rows() != x_tilde.n_rows() || x.n_cols() != x_tilde.n_cols()) {
    throw std::invalid_argument("inputs must share shape");
  }
  if (x.n_rows() > kMaxOracleRows || x.n_cols() > kMaxOracleCols) {
    throw std::invalid_argument("instance too large for exhaustive enumeration");
  }
  if (std::holds_alternative<GaussianNoise>(config.lower)) {
    throw std::invalid_argument("outcome enumeration does not support gaussian noise");
  }
  validate_config(config);
  if (const auto* pr = std::get_if<PerRowSelection>(&config.selection)) {
    if (pr->ps.size() != x.n_rows()) {
      throw std::invalid_argument("per-row selection length must match row count");
    }
  }

  const std::size_t n = x.n_rows();
  const std::size_t d = x.n_cols();
  const std::size_t n_cells = n * d;

  std::vector<OutcomeAtom> atoms;
  std::vector<double> values(n_cells, 0.0);
  std::vector<std::uint8_t> tau(n, 0);

  for (std::size_t tau_mask = 0; tau_mask < (std::size_t{1} << n); ++tau_mask) {
    double phi = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      tau[i] = (tau_mask >> i) & 1;
      const double p = selection_prob(config.selection, i);
      phi *= tau[i] ? p : 1.0 - p;
    }
    if (phi == 0.0) continue;

    for (std::size_t w_mask = 0; w_mask < (std::size_t{1} << n_cells); ++w_mask) {
      for (std::size_t c = 0; c < n_cells; ++c) {
        values[c] = static_cast<double>((w_mask >> c) & 1);
      }
      double pc = phi;
      double pp = phi;
      for (std::size_t i = 0; i < n && (pc > 0.0 || pp > 0.0); ++i) {
        if (tau[i]) {
          pc *= row_noise_prob(config.lower, x, values, i, d);
          pp *= row_noise_prob(config.lower, x_tilde, values, i, d);
        } else {
          if (!row_equals(x, values, i, d)) pc = 0.0;
          if (!row_equals(x_tilde, values, i, d)) pp = 0.0;
        }
      }
      if (pc == 0.0 && pp == 0.0) continue;
      atoms.push_back(OutcomeAtom{
          ExtendedMatrix(FeatureMatrix(n, d, Domain::Binary, values), tau), pc, pp});
    }
  }
  return atoms;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double atom_ratio(const OutcomeAtom& a) {
  if (a.prob_perturbed == 0.0) return kInf;
  return a.prob_clean / a.prob_perturbed;
}

std::vector<std::size_t> by_descending_ratio(const std::vector<OutcomeAtom>& atoms) {
  std::vector<std::size_t> order(atoms.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return atom_ratio(atoms[a]) > atom_ratio(atoms[b]);
  });
  return order;
}

}  // namespace

double exact_worst_case_lower(const std::vector<OutcomeAtom>& atoms, double budget) {
  long double remaining = std::clamp(budget, 0.0, 1.0);
  long double acc = 0.0;
  for (std::size_t idx : by_descending_ratio(atoms)) {
    if (remaining <= 0.0) break;
    const long double nu = atoms[idx].prob_clean;
    if (nu <= 0.0) continue;
    const long double take = std::min(remaining, nu);
    acc += static_cast<long double>(atoms[idx].prob_perturbed) * (take / nu);
    remaining -= take;
  }
  return static_cast<double>(std::min<long double>(acc, 1.0));
}

double exact_worst_case_upper(const std::vector<OutcomeAtom>& atoms, double budget) {
  long double remaining = std::clamp(budget, 0.0, 1.0);
  long double acc = 0.0;
  const auto order = by_descending_ratio(atoms);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const long double nu = atoms[*it].prob_clean;
    const long double nu_t = atoms[*it].prob_perturbed;
    if (nu <= 0.0) {
      acc += nu_t;
      continue;
    }
    if (remaining <= 0.0) break;
    const long double take = std::min(remaining, nu);
    acc += nu_t * (take / nu);
    remaining -= take;
  }
  return static_cast<double>(std::min<long double>(acc, 1.0));
}

RegionMassReport region_accounting(const std::vector<OutcomeAtom>& atoms,
                                   const FeatureMatrix& x, const FeatureMatrix& x_tilde) {
  const auto changed = changed_row_set(x, x_tilde);
  RegionMassReport rep;
  for (const OutcomeAtom& atom : atoms) {
    const auto& tau = atom.z.indicator();
    bool all_changed_selected = true;
    for (std::size_t row : changed) {
      if (!tau[row]) {
        all_changed_selected = false;
        break;
      }
    }
    if (all_changed_selected) {
      rep.shared_mass_clean += atom.prob_clean;
      rep.shared_mass_perturbed += atom.prob_perturbed;
    } else if (atom.prob_clean > 0.0) {
      rep.only_clean_mass_clean += atom.prob_clean;
      rep.only_clean_mass_perturbed += atom.prob_perturbed;
    } else {
      rep.only_pert_mass_clean += atom.prob_clean;
      rep.only_pert_mass_perturbed += atom.prob_perturbed;
    }
  }
  return rep;
}

double gaussian_halfspace_check(double p, double distance, double sigma) {
  if (!(sigma > 0.0) || !(distance >= 0.0)) {
    throw std::invalid_argument("halfspace check requires sigma > 0 and distance >= 0");
  }
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  // Clean mass of {w : w <= t} under N(0, sigma^2) is Phi(t / sigma);
  // bisect t so it equals p.
  double lo = -40.0 * sigma;
  double hi = 40.0 * sigma;
  for (int i = 0; i < 200 && hi - lo > 1e-14 * sigma; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (std_normal_cdf(mid / sigma) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double t = 0.5 * (lo + hi);
  // Perturbed mean sits `distance` further from the halfspace.
  return std_normal_cdf((t - distance) / sigma);
}

}  // namespace oracle
}  // namespace hrs
