#include "common.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hrs/dataset.hpp"
#include "hrs/version.hpp"

namespace hrs::cli {

namespace {

std::string trim(const std::string& s) {
  const std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) {
    return "";
  }
  const std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string::size_type pos = 0;
  for (;;) {
    const std::string::size_type next = s.find(sep, pos);
    if (next == std::string::npos) {
      parts.push_back(s.substr(pos));
      return parts;
    }
    parts.push_back(s.substr(pos, next - pos));
    pos = next + 1;
  }
}

double parse_double(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw ConfigError(what + ": not a number: '" + text + "'");
  }
  if (used != t.size() || !std::isfinite(v)) {
    throw ConfigError(what + ": not a finite number: '" + text + "'");
  }
  return v;
}

std::uint64_t parse_u64(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  if (t.empty() || t[0] == '-') {
    throw ConfigError(what + ": not a non-negative integer: '" + text + "'");
  }
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(t, &used);
  } catch (const std::exception&) {
    throw ConfigError(what + ": not a non-negative integer: '" + text + "'");
  }
  if (used != t.size()) {
    throw ConfigError(what + ": not a non-negative integer: '" + text + "'");
  }
  return v;
}

}  // namespace

std::map<std::string, std::string> KvConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file: " + path);
  }
  std::map<std::string, std::string> entries;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') {
      continue;
    }
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(t.substr(0, eq));
    if (key.empty()) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
    }
    entries[key] = trim(t.substr(eq + 1));
  }
  return entries;
}

void KvConfig::override_with(const std::map<std::string, std::string>& overrides) {
  for (const auto& [key, value] : overrides) {
    entries_[key] = value;
  }
}

std::string KvConfig::take(const std::string& key) {
  const auto it = entries_.find(key);
  std::string value = it->second;
  entries_.erase(it);
  resolved_[key] = value;
  return value;
}

std::string KvConfig::get_string(const std::string& key, const std::string& fallback) {
  if (!has(key)) {
    resolved_[key] = fallback;
    return fallback;
  }
  return take(key);
}

std::string KvConfig::require_string(const std::string& key) {
  if (!has(key)) {
    throw ConfigError("missing required key: " + key);
  }
  return take(key);
}

double KvConfig::get_double(const std::string& key, double fallback) {
  if (!has(key)) {
    resolved_[key] = fmt12(fallback);
    return fallback;
  }
  return parse_double(take(key), key);
}

std::uint64_t KvConfig::get_u64(const std::string& key, std::uint64_t fallback) {
  if (!has(key)) {
    resolved_[key] = std::to_string(fallback);
    return fallback;
  }
  return parse_u64(take(key), key);
}

std::size_t KvConfig::get_size(const std::string& key, std::size_t fallback) {
  return static_cast<std::size_t>(get_u64(key, fallback));
}

void KvConfig::reject_unknown() const {
  if (entries_.empty()) {
    return;
  }
  std::string msg = "unknown config keys:";
  for (const auto& [key, value] : entries_) {
    msg += " " + key;
  }
  throw ConfigError(msg);
}

std::vector<double> parse_range(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  if (t.empty()) {
    throw ConfigError(what + ": empty range");
  }
  std::vector<double> values;
  if (t.find(':') != std::string::npos) {
    const std::vector<std::string> parts = split(t, ':');
    if (parts.size() != 3) {
      throw ConfigError(what + ": range must be lo:hi:step, got '" + text + "'");
    }
    const double lo = parse_double(parts[0], what);
    const double hi = parse_double(parts[1], what);
    const double step = parse_double(parts[2], what);
    if (step <= 0.0) {
      throw ConfigError(what + ": step must be positive");
    }
    if (hi < lo) {
      throw ConfigError(what + ": hi below lo");
    }
    // Inclusive endpoint, tolerant of the usual floating-point shortfall.
    const std::size_t count =
        static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    values.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      values.push_back(lo + static_cast<double>(i) * step);
    }
    return values;
  }
  for (const std::string& part : split(t, ',')) {
    values.push_back(parse_double(part, what));
  }
  return values;
}

std::vector<std::size_t> parse_index_range(const std::string& text, const std::string& what) {
  std::vector<std::size_t> out;
  for (double v : parse_range(text, what)) {
    const double rounded = std::round(v);
    if (v < 0.0 || std::abs(v - rounded) > 1e-9) {
      throw ConfigError(what + ": expected non-negative integers, got " + fmt12(v));
    }
    out.push_back(static_cast<std::size_t>(rounded));
  }
  return out;
}

Selection parse_selection(const std::string& text) {
  const std::string t = trim(text);
  if (t.rfind("uniform:", 0) == 0) {
    return UniformSelection{parse_double(t.substr(8), "selection")};
  }
  if (t.rfind("perrow:", 0) == 0) {
    PerRowSelection sel;
    for (const std::string& part : split(t.substr(7), ',')) {
      sel.ps.push_back(parse_double(part, "selection"));
    }
    return sel;
  }
  throw ConfigError("selection must be uniform:<p> or perrow:<p1,p2,...>, got '" + text + "'");
}

LowerNoise parse_noise(const std::string& text) {
  const std::string t = trim(text);
  if (t == "ablation") {
    return AblationNoise{};
  }
  if (t.rfind("gaussian:", 0) == 0) {
    return GaussianNoise{parse_double(t.substr(9), "noise")};
  }
  if (t.rfind("sparseflip:", 0) == 0) {
    const std::vector<std::string> parts = split(t.substr(11), ',');
    if (parts.size() != 2) {
      throw ConfigError("sparseflip noise needs p_plus,p_minus, got '" + text + "'");
    }
    return SparseFlipNoise{parse_double(parts[0], "noise"), parse_double(parts[1], "noise")};
  }
  throw ConfigError("noise must be gaussian:<sigma>, sparseflip:<p+,p->, or ablation, got '" +
                    text + "'");
}

std::string selection_to_string(const Selection& sel) {
  if (const auto* u = std::get_if<UniformSelection>(&sel)) {
    return "uniform:" + fmt12(u->p);
  }
  const auto& ps = std::get<PerRowSelection>(sel).ps;
  std::string s = "perrow:";
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (i > 0) {
      s += ",";
    }
    s += fmt12(ps[i]);
  }
  return s;
}

std::string noise_to_string(const LowerNoise& noise) {
  if (const auto* g = std::get_if<GaussianNoise>(&noise)) {
    return "gaussian:" + fmt12(g->sigma);
  }
  if (const auto* f = std::get_if<SparseFlipNoise>(&noise)) {
    return "sparseflip:" + fmt12(f->p_plus) + "," + fmt12(f->p_minus);
  }
  return "ablation";
}

std::vector<ThreatModel> build_threat_grid(const std::string& kind,
                                           const std::vector<std::size_t>& r_values,
                                           const std::vector<double>& eps_values,
                                           const std::vector<std::size_t>& ra_values,
                                           const std::vector<std::size_t>& rd_values) {
  std::vector<ThreatModel> grid;
  if (kind == "l2") {
    if (r_values.empty() || eps_values.empty()) {
      throw ConfigError("l2 threat grid needs threat_r and threat_eps");
    }
    for (std::size_t r : r_values) {
      for (double eps : eps_values) {
        grid.push_back(ContinuousL2{r, eps});
      }
    }
  } else if (kind == "flip") {
    if (r_values.empty() || ra_values.empty() || rd_values.empty()) {
      throw ConfigError("flip threat grid needs threat_r, threat_ra, and threat_rd");
    }
    for (std::size_t r : r_values) {
      for (std::size_t ra : ra_values) {
        for (std::size_t rd : rd_values) {
          grid.push_back(DiscreteFlip{r, ra, rd});
        }
      }
    }
  } else {
    throw ConfigError("threat must be l2 or flip, got '" + kind + "'");
  }
  for (const ThreatModel& t : grid) {
    validate_threat(t);
  }
  return grid;
}

CertifyMode parse_mode(const std::string& text) {
  if (text == "binary") {
    return CertifyMode::Binary;
  }
  if (text == "multiclass") {
    return CertifyMode::MultiClass;
  }
  throw ConfigError("mode must be binary or multiclass, got '" + text + "'");
}

std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string fmt_bool(bool b) { return b ? "true" : "false"; }

void atomic_write_file(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
  }
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw DataError("cannot write: " + tmp.string());
    }
    out << content;
    out.flush();
    if (!out) {
      throw DataError("write failed: " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    throw DataError("cannot rename " + tmp.string() + " to " + path + ": " + ec.message());
  }
}

void write_resolved_config(const std::string& path,
                           const std::map<std::string, std::string>& resolved) {
  std::string content = std::string("# hrs ") + std::string(kVersion) + "\n";
  for (const auto& [key, value] : resolved) {
    content += key + " = " + value + "\n";
  }
  atomic_write_file(path, content);
}

int default_workers() {
  const char* env = std::getenv("HRS_WORKERS");
  if (env == nullptr || *env == '\0') {
    return 1;
  }
  const std::uint64_t v = parse_u64(env, "HRS_WORKERS");
  if (v == 0) {
    throw ConfigError("HRS_WORKERS must be positive");
  }
  return static_cast<int>(v);
}

CommonRun resolve_common(KvConfig& kv) {
  CommonRun run;
  run.dataset_path = kv.require_string("dataset");
  run.out_dir = kv.require_string("out");
  run.classifier_spec = kv.get_string("classifier", "centroid");

  const std::string kind = kv.require_string("threat");
  const std::vector<std::size_t> r_values =
      parse_index_range(kv.require_string("threat_r"), "threat_r");
  std::vector<double> eps_values;
  std::vector<std::size_t> ra_values;
  std::vector<std::size_t> rd_values;
  if (kind == "l2") {
    eps_values = parse_range(kv.require_string("threat_eps"), "threat_eps");
  } else if (kind == "flip") {
    ra_values = parse_index_range(kv.require_string("threat_ra"), "threat_ra");
    rd_values = parse_index_range(kv.require_string("threat_rd"), "threat_rd");
  }
  run.threat_grid = build_threat_grid(kind, r_values, eps_values, ra_values, rd_values);

  run.params.n0 = kv.get_size("n0", 1000);
  run.params.n1 = kv.get_size("n1", 10000);
  run.params.alpha = kv.get_double("alpha", 0.01);
  run.params.mode = parse_mode(kv.get_string("mode", "binary"));
  run.params.workers = static_cast<int>(kv.get_u64("workers", default_workers()));
  kv.unrecord("workers");
  if (run.params.workers < 1) {
    throw ConfigError("workers must be positive");
  }
  run.seed = kv.get_u64("seed", 0);
  return run;
}

}  // namespace hrs::cli
