#include <iostream>
#include <string>

#include "commands.hpp"
#include "common.hpp"
#include "hrs/certificates.hpp"
#include "hrs/certify.hpp"
#include "hrs/classifier.hpp"
#include "hrs/dataset.hpp"
#include "hrs/record.hpp"

namespace hrs::cli {

namespace {

std::string summary_csv(const DatasetEvaluation& eval, const SmoothingConfig& config) {
  std::string csv = "sample_id,predicted,abstained,p_lower,delta,radius_spec,certified\n";
  for (const CertificateRecord& rec : eval.records) {
    const std::string predicted =
        rec.predicted.has_value() ? std::to_string(*rec.predicted) : std::string("ABSTAIN");
    for (const GridVerdict& verdict : rec.verdicts) {
      const double delta = delta_for(config.selection, threat_rows(verdict.threat)).delta;
      csv += rec.sample_id + "," + predicted + "," + fmt_bool(rec.abstained()) + "," +
             fmt12(rec.p_lower) + "," + fmt12(delta) + "," + threat_label(verdict.threat) +
             "," + fmt_bool(verdict.certified) + "\n";
    }
  }
  return csv;
}

}  // namespace

int cmd_certify(const std::string& config_path,
                const std::map<std::string, std::string>& overrides) {
  KvConfig kv(config_path.empty() ? std::map<std::string, std::string>{}
                                  : KvConfig::parse_file(config_path));
  kv.override_with(overrides);

  CommonRun run;
  SmoothingConfig config;
  {
    run = resolve_common(kv);
    config.selection = parse_selection(kv.require_string("selection"));
    config.lower = parse_noise(kv.require_string("noise"));
    kv.reject_unknown();
    validate_config(config);
  }

  const Dataset ds = load_dataset_jsonl(run.dataset_path);
  const auto classifier = make_builtin_classifier(run.classifier_spec, &ds);

  const DatasetEvaluation eval =
      evaluate_dataset(*classifier, ds, config, run.threat_grid, run.params, run.seed);

  std::string records;
  for (const CertificateRecord& rec : eval.records) {
    records += record_to_json(rec) + "\n";
  }
  atomic_write_file(run.out_dir + "/records.jsonl", records);
  atomic_write_file(run.out_dir + "/summary.csv", summary_csv(eval, config));
  write_resolved_config(run.out_dir + "/config.resolved", kv.resolved());

  std::cout << "samples=" << ds.samples.size() << " clean_acc=" << fmt12(eval.clean_accuracy)
            << " cert_acc_last=" << fmt12(eval.certified_accuracy.back())
            << " out=" << run.out_dir << "\n";
  return kExitOk;
}

}  // namespace hrs::cli
