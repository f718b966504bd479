#include "hrs/validation.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "hrs/certificates.hpp"
#include "hrs/matrix.hpp"
#include "hrs/oracle.hpp"
#include "hrs/rng.hpp"

namespace hrs {
namespace validation {

namespace {

struct Accumulator {
  std::size_t instances = 0;
  double max_abs_err = 0.0;
  std::string worst_instance;

  void add(double err, const std::string& instance) {
    ++instances;
    if (err > max_abs_err || worst_instance.empty()) {
      max_abs_err = err;
      worst_instance = instance;
    }
  }
};

IdentityResult finish(const std::string& name, const Accumulator& acc, double tol) {
  IdentityResult r;
  r.name = name;
  r.instances = acc.instances;
  r.max_abs_err = acc.max_abs_err;
  r.tolerance = tol;
  r.pass = acc.instances > 0 && acc.max_abs_err <= tol;
  r.worst_instance = acc.worst_instance;
  return r;
}

FeatureMatrix checkerboard(std::size_t n, std::size_t d) {
  std::vector<double> v(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      v[i * d + j] = static_cast<double>((i + j) % 2);
    }
  }
  return FeatureMatrix(n, d, Domain::Binary, std::move(v));
}

// Flips cells of the given rows: every cell (full pattern) or cell 0 only.
FeatureMatrix perturb(const FeatureMatrix& x, const std::vector<std::size_t>& rows,
                      bool full_rows) {
  std::vector<double> v = x.values();
  const std::size_t d = x.n_cols();
  for (std::size_t i : rows) {
    const std::size_t width = full_rows ? d : 1;
    for (std::size_t j = 0; j < width; ++j) {
      v[i * d + j] = 1.0 - v[i * d + j];
    }
  }
  return FeatureMatrix(x.n_rows(), x.n_cols(), x.domain(), std::move(v));
}

std::string describe(std::size_t n, std::size_t d, double p, const char* noise,
                     const std::vector<std::size_t>& rows, bool full, double p_y) {
  std::ostringstream os;
  os << "n=" << n << " d=" << d << " p=" << p << " noise=" << noise << " rows={";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i) os << ",";
    os << rows[i];
  }
  os << "} pattern=" << (full ? "full" : "cell0");
  if (p_y >= 0.0) os << " p_y=" << p_y;
  return os.str();
}

// Mass sums stay intact so construction succeeds, but the clean masses end
// up attached to the wrong ratios; any comparison against the oracle fails.
RegionTable swap_clean_masses(const RegionTable& table) {
  std::vector<Region> regions = table.regions();
  std::swap(regions.front().log_mass_clean, regions.back().log_mass_clean);
  return RegionTable(std::move(regions));
}

const double kPyGrid[] = {0.0,  0.05, 0.1,  0.15, 0.2,  0.25, 0.3,  0.35, 0.4,  0.45, 0.5,
                          0.55, 0.6,  0.65, 0.7,  0.75, 0.8,  0.85, 0.9,  0.95, 1.0};

}  // namespace

std::vector<IdentityResult> run_oracle_suite(const SuiteOptions& opts) {
  Accumulator theorem_lower;
  Accumulator theorem_upper;
  Accumulator accounting;
  Accumulator delta_zero;
  Accumulator ablation_red;
  Accumulator halfspace;

  const double p_grid[] = {0.5, 0.8, 1.0};
  const std::pair<double, double> flip_grid[] = {{0.1, 0.4}, {0.05, 0.9}, {0.5, 0.5}};

  for (std::size_t n = 1; n <= opts.max_rows; ++n) {
    for (std::size_t d = 1; d <= opts.max_cols; ++d) {
      const FeatureMatrix x = checkerboard(n, d);
      for (std::size_t subset = 1; subset < (std::size_t{1} << n); ++subset) {
        std::vector<std::size_t> rows;
        for (std::size_t i = 0; i < n; ++i) {
          if ((subset >> i) & 1) rows.push_back(i);
        }
        for (bool full : {true, false}) {
          if (!full && d == 1) continue;  // identical to the full pattern
          const FeatureMatrix xt = perturb(x, rows, full);
          const FlipCounts flips = flip_counts(x, xt);

          for (double p : p_grid) {
            const double delta = delta_uniform(p, rows.size()).delta;
            const SmoothingConfig ablation_cfg{UniformSelection{p}, AblationNoise{}};
            const auto ablation_atoms = oracle::enumerate_outcomes(x, xt, ablation_cfg);
            const RegionTable unit_table = sparse_regions(0, 0, 0.0, 1.0);

            {
              const auto rep = oracle::region_accounting(ablation_atoms, x, xt);
              const std::string inst = describe(n, d, p, "ablation", rows, full, -1.0);
              accounting.add(std::fabs(rep.only_clean_mass_clean - delta), inst);
              accounting.add(std::fabs(rep.shared_mass_clean - (1.0 - delta)), inst);
              accounting.add(std::fabs(rep.shared_mass_perturbed - (1.0 - delta)), inst);
              accounting.add(std::fabs(rep.only_pert_mass_perturbed - delta), inst);
              accounting.add(std::fabs(rep.only_clean_mass_perturbed), inst);
              accounting.add(std::fabs(rep.only_pert_mass_clean), inst);
            }

            for (double p_y : kPyGrid) {
              const std::string inst = describe(n, d, p, "ablation", rows, full, p_y);
              const double hier_lo = hier_discrete_lower(p_y, delta, unit_table);
              const double hier_up = hier_discrete_upper(p_y, delta, unit_table);
              theorem_lower.add(
                  std::fabs(hier_lo - oracle::exact_worst_case_lower(ablation_atoms, p_y)),
                  inst);
              theorem_upper.add(
                  std::fabs(hier_up - oracle::exact_worst_case_upper(ablation_atoms, p_y)),
                  inst);
              ablation_red.add(std::fabs(hier_lo - ablation_lower(p_y, delta)), inst);
              ablation_red.add(std::fabs(hier_up - ablation_upper(p_y, delta)), inst);
            }

            for (const auto& [p_plus, p_minus] : flip_grid) {
              const SmoothingConfig cfg{UniformSelection{p}, SparseFlipNoise{p_plus, p_minus}};
              const auto atoms = oracle::enumerate_outcomes(x, xt, cfg);
              RegionTable table = sparse_regions(flips.additions, flips.deletions, p_plus,
                                                 p_minus);
              if (opts.inject_fault && table.regions().size() >= 2) {
                table = swap_clean_masses(table);
              }

              char noise[48];
              std::snprintf(noise, sizeof(noise), "flip(%g,%g)", p_plus, p_minus);

              {
                const auto rep = oracle::region_accounting(atoms, x, xt);
                const std::string inst = describe(n, d, p, noise, rows, full, -1.0);
                accounting.add(std::fabs(rep.only_clean_mass_clean - delta), inst);
                accounting.add(std::fabs(rep.shared_mass_clean - (1.0 - delta)), inst);
                accounting.add(std::fabs(rep.shared_mass_perturbed - (1.0 - delta)), inst);
                accounting.add(std::fabs(rep.only_pert_mass_perturbed - delta), inst);
                accounting.add(std::fabs(rep.only_clean_mass_perturbed), inst);
                accounting.add(std::fabs(rep.only_pert_mass_clean), inst);
              }

              for (double p_y : kPyGrid) {
                const std::string inst = describe(n, d, p, noise, rows, full, p_y);
                theorem_lower.add(std::fabs(hier_discrete_lower(p_y, delta, table) -
                                            oracle::exact_worst_case_lower(atoms, p_y)),
                                  inst);
                theorem_upper.add(std::fabs(hier_discrete_upper(p_y, delta, table) -
                                            oracle::exact_worst_case_upper(atoms, p_y)),
                                  inst);
                if (p == 1.0) {
                  delta_zero.add(std::fabs(hier_discrete_lower(p_y, 0.0, table) -
                                           discrete_lp_lower(table, p_y)),
                                 inst);
                  delta_zero.add(std::fabs(hier_discrete_upper(p_y, 0.0, table) -
                                           discrete_lp_upper(table, p_y)),
                                 inst);
                }
              }
            }
          }
        }
      }
    }
  }

  // Gaussian reductions at delta = 0 collapse bit-exactly to the plain bound.
  {
    RngStream rng(opts.seed, 1);
    for (std::size_t i = 0; i < 200; ++i) {
      const double p_y = 0.001 + 0.998 * rng.next_unit();
      const double eps = 3.0 * rng.next_unit();
      const double sigma = 0.1 + 1.9 * rng.next_unit();
      char buf[96];
      std::snprintf(buf, sizeof(buf), "gaussian p_y=%.6f eps=%.6f sigma=%.6f", p_y, eps, sigma);
      delta_zero.add(std::fabs(hier_gaussian_lower(p_y, eps, sigma, 0.0) -
                               gaussian_lower_bound(p_y, eps, sigma)),
                     buf);
      delta_zero.add(std::fabs(hier_gaussian_upper(p_y, eps, sigma, 0.0) -
                               gaussian_upper_bound(p_y, eps, sigma)),
                     buf);
    }
  }

  {
    RngStream rng(opts.seed, 2);
    for (std::size_t i = 0; i < opts.halfspace_points; ++i) {
      const double p_y = 0.001 + 0.998 * rng.next_unit();
      const double sigma = 0.1 + 1.9 * rng.next_unit();
      const double dist = 3.0 * sigma * rng.next_unit();
      char buf[96];
      std::snprintf(buf, sizeof(buf), "halfspace p_y=%.6f dist=%.6f sigma=%.6f", p_y, dist,
                    sigma);
      halfspace.add(std::fabs(oracle::gaussian_halfspace_check(p_y, dist, sigma) -
                              gaussian_lower_bound(p_y, dist, sigma)),
                    buf);
    }
  }

  std::vector<IdentityResult> results;
  results.push_back(finish("theorem-lower", theorem_lower, opts.tol_theorem));
  results.push_back(finish("theorem-upper", theorem_upper, opts.tol_theorem));
  results.push_back(finish("region-accounting", accounting, opts.tol_accounting));
  results.push_back(finish("delta-zero-reduction", delta_zero, opts.tol_reduction));
  results.push_back(finish("ablation-reduction", ablation_red, opts.tol_reduction));
  results.push_back(finish("gaussian-halfspace", halfspace, opts.tol_halfspace));
  return results;
}

std::string format_suite_report(const std::vector<IdentityResult>& results) {
  std::ostringstream os;
  for (const auto& r : results) {
    char line[256];
    std::snprintf(line, sizeof(line), "%-22s %s  max|err|=%.3e  tol=%.1e  instances=%zu\n",
                  r.name.c_str(), r.pass ? "PASS" : "FAIL", r.max_abs_err, r.tolerance,
                  r.instances);
    os << line;
    if (!r.pass) {
      os << "  worst instance: " << r.worst_instance << "\n";
    }
  }
  return os.str();
}

bool all_passed(const std::vector<IdentityResult>& results) {
  for (const auto& r : results) {
    if (!r.pass) return false;
  }
  return !results.empty();
}

}  // namespace validation
}  // namespace hrs
