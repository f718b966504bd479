#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "commands.hpp"
#include "common.hpp"
#include "hrs/dataset.hpp"
#include "hrs/sweep.hpp"

namespace hrs::cli {

namespace {

struct PlotRow {
  std::size_t trial_id = 0;
  std::string method;
  double clean = 0.0;
  double cert = 0.0;
};

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

// Accepts both trials.csv (9 columns) and pareto.csv (10, with dominated).
std::vector<PlotRow> read_points(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open sweep output: " + path);
  }
  std::vector<PlotRow> rows;
  std::string line;
  bool header = true;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (header) {
      header = false;
      if (line.rfind("trial_id,method,", 0) != 0) {
        throw DataError("not a sweep output file: " + path);
      }
      continue;
    }
    if (line.empty()) {
      continue;
    }
    const std::vector<std::string> f = split_csv(line);
    if (f.size() != 9 && f.size() != 10) {
      throw DataError("corrupt row in " + path + " at line " + std::to_string(lineno));
    }
    try {
      PlotRow row;
      row.trial_id = std::stoull(f[0]);
      row.method = f[1];
      row.clean = std::stod(f[7]);
      row.cert = std::stod(f[8]);
      rows.push_back(row);
    } catch (const std::exception&) {
      throw DataError("corrupt row in " + path + " at line " + std::to_string(lineno));
    }
  }
  return rows;
}

}  // namespace

int cmd_plotdata(const PlotdataOptions& opts) {
  namespace fs = std::filesystem;

  std::string input = opts.input;
  if (fs::is_directory(input)) {
    input = (fs::path(input) / "pareto.csv").string();
  }
  const std::vector<PlotRow> rows = read_points(input);

  std::map<std::string, std::vector<PlotRow>> by_method;
  for (SweepMethod m :
       {SweepMethod::Hierarchical, SweepMethod::LowerOnly, SweepMethod::AblationOnly}) {
    by_method[to_string(m)];
  }
  for (const PlotRow& row : rows) {
    by_method[row.method].push_back(row);
  }

  for (const auto& [method, points] : by_method) {
    std::string scatter = "trial_id,clean_acc,cert_acc\n";
    for (const PlotRow& row : points) {
      scatter += std::to_string(row.trial_id) + "," + fmt12(row.clean) + "," +
                 fmt12(row.cert) + "\n";
    }
    atomic_write_file(opts.out_dir + "/scatter_" + method + ".csv", scatter);

    // Front polyline: the method's own non-dominated points, best clean first.
    std::vector<ParetoPoint> pts;
    for (const PlotRow& row : points) {
      ParetoPoint pt;
      pt.trial_id = row.trial_id;
      pt.clean_accuracy = row.clean;
      pt.certified_accuracy = row.cert;
      pts.push_back(pt);
    }
    std::string front = "clean_acc,cert_acc\n";
    for (const ParetoPoint& pt : pareto_front(std::move(pts))) {
      front += fmt12(pt.clean_accuracy) + "," + fmt12(pt.certified_accuracy) + "\n";
    }
    atomic_write_file(opts.out_dir + "/front_" + method + ".csv", front);
  }

  std::cout << "points=" << rows.size() << " out=" << opts.out_dir << "\n";
  return kExitOk;
}

}  // namespace hrs::cli
