#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace hrs::cli {

// Each command takes the config-file path (optional) plus flag overrides
// already collected as key-value pairs; flags win over file keys. Returns
// the process exit code.
int cmd_certify(const std::string& config_path,
                const std::map<std::string, std::string>& overrides);
int cmd_sweep(const std::string& config_path,
              const std::map<std::string, std::string>& overrides);

struct OracleCheckOptions {
  std::size_t max_rows = 3;
  std::size_t max_cols = 2;
  double tolerance = 1e-9;
  std::size_t halfspace_points = 1000;
  std::uint64_t seed = 20240817;
  bool inject_fault = false;
};

int cmd_oracle_check(const OracleCheckOptions& opts);

struct PlotdataOptions {
  std::string input;  // sweep output directory or a pareto.csv path
  std::string out_dir;
};

int cmd_plotdata(const PlotdataOptions& opts);

}  // namespace hrs::cli
