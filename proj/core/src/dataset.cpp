#include "hrs/dataset.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace hrs {

using nlohmann::json;

int Dataset::n_classes() const {
  int max_label = -1;
  for (const auto& s : samples) {
    if (s.label > max_label) max_label = s.label;
  }
  return max_label + 1;
}

Dataset parse_dataset_jsonl(std::istream& in, const std::string& source_name) {
  Dataset ds;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      const auto id = j.at("id").get<std::string>();
      const int label = j.at("label").get<int>();
      if (label < 0) throw std::invalid_argument("label must be non-negative");
      const auto n_rows = j.at("n_rows").get<std::size_t>();
      const auto n_cols = j.at("n_cols").get<std::size_t>();
      const Domain domain = domain_from_string(j.at("domain").get<std::string>());
      auto values = j.at("values").get<std::vector<double>>();
      ds.samples.push_back(
          LabeledSample{id, label, FeatureMatrix(n_rows, n_cols, domain, std::move(values))});
    } catch (const std::exception& e) {
      std::ostringstream msg;
      msg << source_name << ":" << line_no << ": " << e.what();
      throw DataError(msg.str());
    }
  }
  return ds;
}

void write_dataset_jsonl(const Dataset& ds, std::ostream& out) {
  for (const auto& s : ds.samples) {
    json j;
    j["id"] = s.id;
    j["label"] = s.label;
    j["n_rows"] = s.x.n_rows();
    j["n_cols"] = s.x.n_cols();
    j["domain"] = to_string(s.x.domain());
    j["values"] = s.x.values();
    out << j.dump() << "\n";
  }
}

Dataset load_dataset_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open dataset: " + path);
  }
  return parse_dataset_jsonl(in, path);
}

void save_dataset_jsonl(const Dataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw DataError("cannot write dataset: " + path);
  }
  write_dataset_jsonl(ds, out);
  out.flush();
  if (!out) {
    throw DataError("failed writing dataset: " + path);
  }
}

}  // namespace hrs
