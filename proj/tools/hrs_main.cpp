#include <exception>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "common.hpp"
#include "hrs/dataset.hpp"
#include "hrs/version.hpp"

namespace {

using hrs::cli::ConfigError;

// Flags that shadow config-file keys; each records its value into the
// override map only when actually passed, so file keys survive otherwise.
void add_kv_option(CLI::App* cmd, std::map<std::string, std::string>& overrides,
                   const std::string& flag, const std::string& key, const std::string& desc) {
  cmd->add_option_function<std::string>(
      flag, [&overrides, key](const std::string& value) { overrides[key] = value; }, desc);
}

void add_common_options(CLI::App* cmd, std::map<std::string, std::string>& overrides) {
  add_kv_option(cmd, overrides, "--dataset", "dataset", "JSONL dataset path");
  add_kv_option(cmd, overrides, "--out", "out", "output directory");
  add_kv_option(cmd, overrides, "--classifier", "classifier",
                "builtin classifier spec, e.g. centroid or coin:q=0.9,sigma=0.5");
  add_kv_option(cmd, overrides, "--threat", "threat", "threat kind: l2 or flip");
  add_kv_option(cmd, overrides, "--threat-r", "threat_r", "perturbed-row grid");
  add_kv_option(cmd, overrides, "--threat-eps", "threat_eps", "L2 radius grid");
  add_kv_option(cmd, overrides, "--threat-ra", "threat_ra", "0->1 flip-count grid");
  add_kv_option(cmd, overrides, "--threat-rd", "threat_rd", "1->0 flip-count grid");
  add_kv_option(cmd, overrides, "--mode", "mode", "binary or multiclass");
  add_kv_option(cmd, overrides, "--n0", "n0", "selection-round sample count");
  add_kv_option(cmd, overrides, "--n1", "n1", "estimation-round sample count");
  add_kv_option(cmd, overrides, "--alpha", "alpha", "total failure probability");
  add_kv_option(cmd, overrides, "--seed", "seed", "base RNG seed");
  add_kv_option(cmd, overrides, "--workers", "workers", "thread count (default $HRS_WORKERS)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Probabilistic robustness certification for row-structured inputs"};
  app.set_version_flag("--version", std::string("hrs ") + std::string(hrs::kVersion));
  app.require_subcommand(1);

  std::string certify_config;
  std::map<std::string, std::string> certify_overrides;
  CLI::App* certify = app.add_subcommand("certify", "certify a dataset against a threat grid");
  certify->add_option("--config", certify_config, "key = value config file");
  add_common_options(certify, certify_overrides);
  add_kv_option(certify, certify_overrides, "--selection", "selection",
                "uniform:<p> or perrow:<p1,p2,...>");
  add_kv_option(certify, certify_overrides, "--noise", "noise",
                "gaussian:<sigma>, sparseflip:<p+,p->, or ablation");

  std::string sweep_config;
  std::map<std::string, std::string> sweep_overrides;
  CLI::App* sweep = app.add_subcommand("sweep", "sweep smoothing parameters, extract the front");
  sweep->add_option("--config", sweep_config, "key = value config file");
  add_common_options(sweep, sweep_overrides);
  add_kv_option(sweep, sweep_overrides, "--method", "method",
                "hierarchical, lower-only, or ablation-only");
  add_kv_option(sweep, sweep_overrides, "--sampling", "sampling", "grid or random");
  add_kv_option(sweep, sweep_overrides, "--trials", "trials", "trial count for random sampling");
  add_kv_option(sweep, sweep_overrides, "--repeats", "repeats", "dataset repeats per trial");
  add_kv_option(sweep, sweep_overrides, "--p-grid", "p_grid", "selection probability grid");
  add_kv_option(sweep, sweep_overrides, "--sigma-grid", "sigma_grid", "gaussian sigma grid");
  add_kv_option(sweep, sweep_overrides, "--p-plus-grid", "p_plus_grid", "0->1 flip prob grid");
  add_kv_option(sweep, sweep_overrides, "--p-minus-grid", "p_minus_grid", "1->0 flip prob grid");

  hrs::cli::OracleCheckOptions oracle_opts;
  CLI::App* oracle = app.add_subcommand("oracle-check", "exhaustive validation of the bounds");
  oracle->add_option("--max-rows", oracle_opts.max_rows, "largest instance row count");
  oracle->add_option("--max-cols", oracle_opts.max_cols, "largest instance column count");
  oracle->add_option("--tolerance", oracle_opts.tolerance, "bound-vs-oracle tolerance");
  oracle->add_option("--halfspace-points", oracle_opts.halfspace_points,
                     "random gaussian cross-check count");
  oracle->add_option("--seed", oracle_opts.seed, "seed for randomized checks");
  oracle->add_flag("--inject-fault", oracle_opts.inject_fault,
                   "corrupt the region tables; the suite must then fail");

  hrs::cli::PlotdataOptions plot_opts;
  CLI::App* plot = app.add_subcommand("plotdata", "plot-ready series from sweep outputs");
  plot->add_option("--in", plot_opts.input, "sweep output directory or pareto.csv")->required();
  plot->add_option("--out", plot_opts.out_dir, "directory for the series files")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? hrs::cli::kExitOk : hrs::cli::kExitConfig;
  }

  try {
    if (certify->parsed()) {
      return hrs::cli::cmd_certify(certify_config, certify_overrides);
    }
    if (sweep->parsed()) {
      return hrs::cli::cmd_sweep(sweep_config, sweep_overrides);
    }
    if (oracle->parsed()) {
      return hrs::cli::cmd_oracle_check(oracle_opts);
    }
    return hrs::cli::cmd_plotdata(plot_opts);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return hrs::cli::kExitConfig;
  } catch (const hrs::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return hrs::cli::kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return hrs::cli::kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return hrs::cli::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
