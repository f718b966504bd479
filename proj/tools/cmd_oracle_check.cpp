#include <iostream>

#include "commands.hpp"
#include "common.hpp"
#include "hrs/validation.hpp"

namespace hrs::cli {

int cmd_oracle_check(const OracleCheckOptions& opts) {
  validation::SuiteOptions suite;
  suite.tol_theorem = opts.tolerance;
  suite.max_rows = opts.max_rows;
  suite.max_cols = opts.max_cols;
  suite.halfspace_points = opts.halfspace_points;
  suite.seed = opts.seed;
  suite.inject_fault = opts.inject_fault;

  const auto results = validation::run_oracle_suite(suite);
  std::cout << validation::format_suite_report(results);
  return validation::all_passed(results) ? kExitOk : 1;
}

}  // namespace hrs::cli
