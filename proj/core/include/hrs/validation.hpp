#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hrs {
namespace validation {

struct SuiteOptions {
  double tol_theorem = 1e-9;      // certified bound vs exhaustive worst case
  double tol_accounting = 1e-12;  // outcome-mass bookkeeping vs delta
  double tol_reduction = 1e-12;   // special-case reductions
  double tol_halfspace = 1e-10;   // gaussian geometric cross-check
  std::size_t max_rows = 3;       // instance grid covers 1..max_rows rows
  std::size_t max_cols = 2;
  std::size_t halfspace_points = 1000;
  std::uint64_t seed = 20240817;
  // Deliberately corrupts multi-region tables so the suite must fail;
  // exercised by tests to prove the checks have teeth.
  bool inject_fault = false;
};

struct IdentityResult {
  std::string name;
  std::size_t instances = 0;
  double max_abs_err = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string worst_instance;  // instance attaining max_abs_err
};

// Runs every identity check between the certified bounds and the exhaustive
// oracle over a deterministic instance grid:
//   theorem-lower / theorem-upper  certified bound == exact worst case
//   region-accounting              reachable-outcome masses == delta split
//   delta-zero-reduction           p = 1 collapses to the plain bound
//   ablation-reduction             ablation equals p -+ delta on every route
//   gaussian-halfspace             closed form == geometric bisection
std::vector<IdentityResult> run_oracle_suite(const SuiteOptions& opts);

// Fixed-width pass/fail table, one line per identity.
std::string format_suite_report(const std::vector<IdentityResult>& results);

bool all_passed(const std::vector<IdentityResult>& results);

}  // namespace validation
}  // namespace hrs
