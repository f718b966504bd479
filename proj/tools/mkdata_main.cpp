#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "common.hpp"
#include "hrs/classifier.hpp"
#include "hrs/dataset.hpp"
#include "hrs/matrix.hpp"

// Generates the synthetic row-structured datasets the certifier and sweeps
// consume. Kept separate from `hrs` so experiment scripts can regenerate
// fixtures without touching certification configs.
int main(int argc, char** argv) {
  CLI::App app{"Synthetic row-structured dataset generator"};

  hrs::SyntheticSpec spec;
  std::string out_path;
  std::string domain = "binary";
  app.add_option("--out", out_path, "output JSONL path")->required();
  app.add_option("--samples", spec.n_samples, "sample count");
  app.add_option("--rows", spec.n_rows, "rows per matrix");
  app.add_option("--cols", spec.n_cols, "data columns per matrix");
  app.add_option("--domain", domain, "binary or real");
  app.add_option("--classes", spec.n_classes, "class count");
  app.add_option("--separation", spec.class_separation, "0 = chance, 1 = clean prototypes");
  app.add_option("--seed", spec.seed, "generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? hrs::cli::kExitOk : hrs::cli::kExitConfig;
  }

  try {
    spec.domain = hrs::domain_from_string(domain);
    const hrs::Dataset ds = hrs::make_synthetic_dataset(spec);
    hrs::save_dataset_jsonl(ds, out_path);
    std::cout << "samples=" << ds.samples.size() << " out=" << out_path << "\n";
    return hrs::cli::kExitOk;
  } catch (const hrs::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return hrs::cli::kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return hrs::cli::kExitConfig;
  }
}
