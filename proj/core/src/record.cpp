#include "hrs/record.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

#include <json.hpp>

namespace hrs {

using nlohmann::json;

VoteCounts::VoteCounts(std::vector<std::uint64_t> counts) : counts_(std::move(counts)) {
  if (counts_.empty()) {
    throw std::invalid_argument("vote counts require at least one class");
  }
  n_ = std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

std::size_t VoteCounts::top_class() const {
  std::size_t best = 0;
  for (std::size_t c = 1; c < counts_.size(); ++c) {
    if (counts_[c] > counts_[best]) best = c;
  }
  return best;
}

std::size_t VoteCounts::second_class() const {
  if (counts_.size() < 2) {
    throw std::logic_error("second class requires at least two classes");
  }
  const std::size_t top = top_class();
  std::size_t best = top == 0 ? 1 : 0;
  for (std::size_t c = 0; c < counts_.size(); ++c) {
    if (c == top) continue;
    if (counts_[c] > counts_[best]) best = c;
  }
  return best;
}

VoteCounts VoteCounts::merged(const VoteCounts& other) const {
  if (other.counts_.size() != counts_.size()) {
    throw std::invalid_argument("cannot merge counts with different class counts");
  }
  std::vector<std::uint64_t> sum = counts_;
  for (std::size_t c = 0; c < sum.size(); ++c) sum[c] += other.counts_[c];
  return VoteCounts(std::move(sum));
}

namespace {

json threat_to_json(const ThreatModel& t) {
  json j;
  if (const auto* c = std::get_if<ContinuousL2>(&t)) {
    j["kind"] = "l2";
    j["r"] = c->r;
    j["epsilon"] = c->epsilon;
  } else {
    const auto& d = std::get<DiscreteFlip>(t);
    j["kind"] = "flip";
    j["r"] = d.r;
    j["r_add"] = d.r_add;
    j["r_del"] = d.r_del;
  }
  return j;
}

ThreatModel threat_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "l2") {
    return ContinuousL2{j.at("r").get<std::size_t>(), j.at("epsilon").get<double>()};
  }
  if (kind == "flip") {
    return DiscreteFlip{j.at("r").get<std::size_t>(), j.at("r_add").get<std::size_t>(),
                        j.at("r_del").get<std::size_t>()};
  }
  throw std::invalid_argument("unknown threat kind: " + kind);
}

}  // namespace

std::string record_to_json(const CertificateRecord& rec) {
  json j;
  j["sample_id"] = rec.sample_id;
  if (rec.predicted.has_value()) {
    j["predicted"] = *rec.predicted;
  } else {
    j["predicted"] = "ABSTAIN";
  }
  j["p_lower"] = rec.p_lower;
  if (rec.p_upper_runner.has_value()) j["p_upper_runner"] = *rec.p_upper_runner;
  j["delta"] = rec.delta;
  json verdicts = json::array();
  for (const auto& v : rec.verdicts) {
    json jv;
    jv["threat"] = threat_to_json(v.threat);
    jv["certified"] = v.certified;
    verdicts.push_back(std::move(jv));
  }
  j["verdicts"] = std::move(verdicts);
  if (rec.max_epsilon.has_value()) {
    if (std::isinf(*rec.max_epsilon)) {
      j["max_epsilon"] = "unbounded";
    } else {
      j["max_epsilon"] = *rec.max_epsilon;
    }
  }
  return j.dump();
}

CertificateRecord record_from_json(const std::string& line) {
  const json j = json::parse(line);
  CertificateRecord rec;
  rec.sample_id = j.at("sample_id").get<std::string>();
  const json& pred = j.at("predicted");
  if (pred.is_string()) {
    if (pred.get<std::string>() != "ABSTAIN") {
      throw std::invalid_argument("predicted must be a class index or ABSTAIN");
    }
  } else {
    rec.predicted = pred.get<int>();
  }
  rec.p_lower = j.at("p_lower").get<double>();
  if (j.contains("p_upper_runner")) rec.p_upper_runner = j["p_upper_runner"].get<double>();
  rec.delta = j.at("delta").get<double>();
  for (const auto& jv : j.at("verdicts")) {
    rec.verdicts.push_back(
        GridVerdict{threat_from_json(jv.at("threat")), jv.at("certified").get<bool>()});
  }
  if (j.contains("max_epsilon")) {
    const json& me = j["max_epsilon"];
    if (me.is_string()) {
      if (me.get<std::string>() != "unbounded") {
        throw std::invalid_argument("max_epsilon must be a number or \"unbounded\"");
      }
      rec.max_epsilon = kUnboundedRadius;
    } else {
      rec.max_epsilon = me.get<double>();
    }
  }
  return rec;
}

}  // namespace hrs
