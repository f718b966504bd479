#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "commands.hpp"
#include "common.hpp"
#include "hrs/classifier.hpp"
#include "hrs/dataset.hpp"
#include "hrs/sweep.hpp"

namespace hrs::cli {

namespace {

constexpr const char* kTrialsHeader =
    "trial_id,method,lower,p,sigma,p_plus,p_minus,clean_acc,cert_acc";

std::string lower_kind(const TrialParams& params) {
  if (params.ablation) {
    return "ablation";
  }
  return params.sigma.has_value() ? "gaussian" : "sparseflip";
}

std::string opt_cell(const std::optional<double>& v) {
  return v.has_value() ? fmt12(*v) : std::string();
}

std::string trial_row(const ParetoPoint& pt) {
  return std::to_string(pt.trial_id) + "," + to_string(pt.method) + "," +
         lower_kind(pt.params) + "," + fmt12(pt.params.p) + "," + opt_cell(pt.params.sigma) +
         "," + opt_cell(pt.params.p_plus) + "," + opt_cell(pt.params.p_minus) + "," +
         fmt12(pt.clean_accuracy) + "," + fmt12(pt.certified_accuracy);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string::size_type pos = 0;
  for (;;) {
    const std::string::size_type next = line.find(',', pos);
    if (next == std::string::npos) {
      fields.push_back(line.substr(pos));
      return fields;
    }
    fields.push_back(line.substr(pos, next - pos));
    pos = next + 1;
  }
}

std::optional<ParetoPoint> parse_trial_row(const std::string& line) {
  const std::vector<std::string> f = split_csv(line);
  if (f.size() != 9) {
    return std::nullopt;
  }
  try {
    ParetoPoint pt;
    pt.trial_id = std::stoull(f[0]);
    pt.method = sweep_method_from_string(f[1]);
    pt.params.p = std::stod(f[3]);
    if (f[2] == "ablation") {
      pt.params.ablation = true;
    } else if (f[2] == "gaussian") {
      pt.params.sigma = std::stod(f[4]);
    } else if (f[2] == "sparseflip") {
      pt.params.p_plus = std::stod(f[5]);
      pt.params.p_minus = std::stod(f[6]);
    } else {
      return std::nullopt;
    }
    pt.clean_accuracy = std::stod(f[7]);
    pt.certified_accuracy = std::stod(f[8]);
    return pt;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

// Rows completed by an earlier, interrupted run. A torn final line (crash
// mid-append) is dropped; anything else malformed means the file is not ours.
std::vector<ParetoPoint> read_completed(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open for resume: " + path);
  }
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    lines.push_back(line);
  }
  if (lines.empty() || lines.front() != kTrialsHeader) {
    throw DataError("not a sweep trials file: " + path);
  }
  std::vector<ParetoPoint> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) {
      continue;
    }
    std::optional<ParetoPoint> pt = parse_trial_row(lines[i]);
    if (!pt.has_value()) {
      if (i + 1 == lines.size()) {
        break;
      }
      throw DataError("corrupt row in " + path + " at line " + std::to_string(i + 1));
    }
    rows.push_back(*pt);
  }
  return rows;
}

SweepRange range_key(KvConfig& kv, const std::string& key) {
  if (!kv.has(key)) {
    return SweepRange{};
  }
  return SweepRange{parse_range(kv.require_string(key), key)};
}

}  // namespace

int cmd_sweep(const std::string& config_path,
              const std::map<std::string, std::string>& overrides) {
  namespace fs = std::filesystem;

  KvConfig kv(config_path.empty() ? std::map<std::string, std::string>{}
                                  : KvConfig::parse_file(config_path));
  kv.override_with(overrides);

  const CommonRun run = resolve_common(kv);
  SweepSpec spec;
  spec.method = sweep_method_from_string(kv.get_string("method", "hierarchical"));
  const std::string sampling = kv.get_string("sampling", "grid");
  if (sampling == "grid") {
    spec.sampling = SweepSampling::Grid;
  } else if (sampling == "random") {
    spec.sampling = SweepSampling::UniformRandom;
  } else {
    throw ConfigError("sampling must be grid or random, got '" + sampling + "'");
  }
  spec.n_trials = kv.get_size("trials", 0);
  if (spec.sampling == SweepSampling::UniformRandom && spec.n_trials == 0) {
    throw ConfigError("random sampling needs trials >= 1");
  }
  spec.repeats = kv.get_size("repeats", 1);
  if (spec.repeats == 0) {
    throw ConfigError("repeats must be positive");
  }
  spec.p_range = range_key(kv, "p_grid");
  spec.sigma_range = range_key(kv, "sigma_grid");
  spec.p_plus_range = range_key(kv, "p_plus_grid");
  spec.p_minus_range = range_key(kv, "p_minus_grid");
  spec.threat_grid = run.threat_grid;
  spec.certify = run.params;
  spec.seed = run.seed;
  kv.reject_unknown();

  const Dataset ds = load_dataset_jsonl(run.dataset_path);
  const auto classifier = make_builtin_classifier(run.classifier_spec, &ds);
  const Domain domain = ds.samples.front().x.domain();

  std::vector<SweepTrial> trials;
  try {
    trials = enumerate_trials(spec, domain);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (trials.empty()) {
    throw ConfigError("sweep enumerates no trials; check the parameter grids");
  }

  const std::string trials_path = run.out_dir + "/trials.csv";
  std::vector<ParetoPoint> existing;
  std::vector<std::size_t> skip;
  if (fs::exists(trials_path)) {
    existing = read_completed(trials_path);
    for (const ParetoPoint& pt : existing) {
      if (pt.trial_id >= trials.size()) {
        throw DataError("trials.csv does not match this sweep; remove " + trials_path);
      }
      skip.push_back(pt.trial_id);
    }
  }

  fs::create_directories(run.out_dir);
  std::ofstream append(trials_path, std::ios::app);
  if (!append) {
    throw DataError("cannot write: " + trials_path);
  }
  if (existing.empty() && fs::file_size(trials_path) == 0) {
    append << kTrialsHeader << "\n";
    append.flush();
  }
  // Each finished trial is appended immediately so an interrupted sweep can
  // resume; the file is rewritten in canonical order on completion.
  TrialSink sink = [&append](const ParetoPoint& pt) {
    append << trial_row(pt) << "\n";
    append.flush();
  };

  std::vector<ParetoPoint> fresh = run_sweep(*classifier, ds, spec, skip, sink);
  append.close();

  std::vector<ParetoPoint> all = std::move(existing);
  all.insert(all.end(), fresh.begin(), fresh.end());
  std::sort(all.begin(), all.end(),
            [](const ParetoPoint& a, const ParetoPoint& b) { return a.trial_id < b.trial_id; });

  std::string canonical = std::string(kTrialsHeader) + "\n";
  for (const ParetoPoint& pt : all) {
    canonical += trial_row(pt) + "\n";
  }
  atomic_write_file(trials_path, canonical);

  mark_dominated(all);
  std::string pareto = std::string(kTrialsHeader) + ",dominated\n";
  for (const ParetoPoint& pt : all) {
    pareto += trial_row(pt) + "," + fmt_bool(pt.dominated) + "\n";
  }
  atomic_write_file(run.out_dir + "/pareto.csv", pareto);
  write_resolved_config(run.out_dir + "/config.resolved", kv.resolved());

  const std::size_t front =
      static_cast<std::size_t>(std::count_if(all.begin(), all.end(), [](const ParetoPoint& p) {
        return !p.dominated;
      }));
  std::cout << "trials=" << all.size() << " new=" << fresh.size() << " front=" << front
            << " out=" << run.out_dir << "\n";
  return kExitOk;
}

}  // namespace hrs::cli
