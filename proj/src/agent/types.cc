#include "htmlforge/agent/types.h"

#include <stdexcept>

namespace htmlforge::agent {

nlohmann::json SubInstruction::to_json() const {
  return {{"text", text}, {"refs", refs}, {"terminal", terminal}};
}

SubInstruction SubInstruction::from_json(const nlohmann::json& j) {
  SubInstruction s;
  s.text = j.at("text").get<std::string>();
  s.refs = j.at("refs").get<std::vector<std::int64_t>>();
  s.terminal = j.at("terminal").get<bool>();
  return s;
}

std::string ExecStatus::name() const {
  switch (kind) {
    case Kind::kOk: return "ok";
    case Kind::kProgramError: return "program_error";
    case Kind::kRetrieverError: return "retriever_error";
    case Kind::kBadUrl: return "bad_url";
  }
  return "ok";
}

nlohmann::json ExecStatus::to_json() const {
  nlohmann::json j{{"kind", name()}};
  if (!detail.empty()) j["detail"] = detail;
  return j;
}

nlohmann::json EpisodeStep::to_json() const {
  nlohmann::json snips = nlohmann::json::array();
  for (const auto& s : snippets) snips.push_back(s.to_json());
  return {{"sub_instruction", sub_instruction.to_json()},
          {"snippets", std::move(snips)},
          {"program", program},
          {"exec_status", exec_status.to_json()},
          {"url", url},
          {"records", records}};
}

std::string EpisodeStatus::name() const {
  switch (kind) {
    case Kind::kSuccess: return "success";
    case Kind::kScored: return "scored";
    case Kind::kFiltered: return "filtered";
    case Kind::kMaxSteps: return "max_steps";
  }
  return "success";
}

nlohmann::json EpisodeStatus::to_json() const {
  nlohmann::json j{{"kind", name()}};
  if (kind == Kind::kScored) j["score"] = score;
  if (kind == Kind::kFiltered) j["reason"] = reason;
  return j;
}

nlohmann::json Episode::to_json() const {
  nlohmann::json s = nlohmann::json::array();
  for (const auto& step : steps) s.push_back(step.to_json());
  return {{"instruction", instruction}, {"status", status.to_json()}, {"steps", std::move(s)}};
}

int coverage_score(std::size_t covered, std::size_t required) {
  if (required == 0 || covered > required) {
    throw std::invalid_argument("coverage_score: need 0 <= covered <= required, required > 0");
  }
  return static_cast<int>((200 * covered + required) / (2 * required));
}

ScoreReport ScoreReport::make(std::vector<std::string> required,
                              const std::vector<std::string>& covered) {
  if (required.empty()) throw std::invalid_argument("score requires at least one attribute");
  ScoreReport r;
  for (const auto& name : required) {
    for (const auto& c : covered) {
      if (c == name) {
        r.covered.push_back(name);
        break;
      }
    }
  }
  r.required_attrs = std::move(required);
  r.score = coverage_score(r.covered.size(), r.required_attrs.size());
  r.success = r.score == 100;
  return r;
}

nlohmann::json ScoreReport::to_json() const {
  return {{"required_attrs", required_attrs},
          {"covered", covered},
          {"score", score},
          {"success", success}};
}

}  // namespace htmlforge::agent
