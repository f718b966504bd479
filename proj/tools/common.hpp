#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hrs/certify.hpp"
#include "hrs/config.hpp"

namespace hrs::cli {

// Problems with flags, config keys, or parameter values. Mapped to exit 2;
// dataset and file I/O problems ride on hrs::DataError and map to exit 3.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;

// Key-value store resolved from a config file plus command-line overrides.
// Every key must be consumed by a typed getter; leftovers are reported as
// unknown keys so typos cannot silently fall back to defaults.
class KvConfig {
 public:
  // Plain text, one `key = value` per line, `#` comments, blank lines ok.
  // Later occurrences of a key win.
  static std::map<std::string, std::string> parse_file(const std::string& path);

  explicit KvConfig(std::map<std::string, std::string> entries)
      : entries_(std::move(entries)) {}

  void override_with(const std::map<std::string, std::string>& overrides);

  bool has(const std::string& key) const { return entries_.count(key) > 0; }
  std::string get_string(const std::string& key, const std::string& fallback);
  std::string require_string(const std::string& key);
  double get_double(const std::string& key, double fallback);
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback);
  std::size_t get_size(const std::string& key, std::size_t fallback);

  // Throws ConfigError listing any key no getter consumed.
  void reject_unknown() const;

  // Consumed keys and their final values, for the resolved-config dump.
  const std::map<std::string, std::string>& resolved() const { return resolved_; }

  // Drops a consumed key from the resolved dump. Used for keys that control
  // execution but not results (worker count), so reruns at different worker
  // counts leave byte-identical output directories.
  void unrecord(const std::string& key) { resolved_.erase(key); }

 private:
  std::string take(const std::string& key);

  std::map<std::string, std::string> entries_;
  std::map<std::string, std::string> resolved_;
};

// Grid grammar: either a comma list `a,b,c` or an inclusive `lo:hi:step`.
std::vector<double> parse_range(const std::string& text, const std::string& what);
// Same grammar restricted to non-negative integers.
std::vector<std::size_t> parse_index_range(const std::string& text, const std::string& what);

Selection parse_selection(const std::string& text);
LowerNoise parse_noise(const std::string& text);
std::string selection_to_string(const Selection& sel);
std::string noise_to_string(const LowerNoise& noise);

// Threat grid in row-major order over the given axis ranges.
std::vector<ThreatModel> build_threat_grid(const std::string& kind,
                                           const std::vector<std::size_t>& r_values,
                                           const std::vector<double>& eps_values,
                                           const std::vector<std::size_t>& ra_values,
                                           const std::vector<std::size_t>& rd_values);

CertifyMode parse_mode(const std::string& text);

// 12 significant digits, `.` decimal point, no separators.
std::string fmt12(double v);
std::string fmt_bool(bool b);

// Writes via a temp file in the same directory and renames over the target.
void atomic_write_file(const std::string& path, const std::string& content);

// `# hrs <version>` line followed by the resolved keys, sorted.
void write_resolved_config(const std::string& path,
                           const std::map<std::string, std::string>& resolved);

// Worker-count default: HRS_WORKERS env var when set, else 1.
int default_workers();

// Keys shared by certify and sweep: dataset, out, classifier, the threat
// grid axes, certify parameters, seed, and workers.
struct CommonRun {
  std::string dataset_path;
  std::string out_dir;
  std::string classifier_spec;
  std::vector<ThreatModel> threat_grid;
  CertifyParams params;
  std::uint64_t seed = 0;
};

CommonRun resolve_common(KvConfig& kv);

}  // namespace hrs::cli
