#include "htmlforge/agent/ports.h"
#include "htmlforge/util/error.h"

namespace htmlforge::agent {
namespace {

nlohmann::json snippets_json(std::span<const snippet::Snippet> snippets) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& s : snippets) out.push_back(s.to_json());
  return out;
}

nlohmann::json summary_request(const SubInstruction& sub, const std::string& page_html) {
  return {{"sub_instruction", sub.to_json()}, {"page_html", page_html}};
}

nlohmann::json program_request(const SubInstruction& sub,
                               std::span<const snippet::Snippet> snippets) {
  return {{"sub_instruction", sub.to_json()}, {"snippets", snippets_json(snippets)}};
}

nlohmann::json summary_json(const SummaryResult& r) {
  return {{"snippets", snippets_json(r.snippets)},
          {"status", r.status.name()},
          {"detail", r.status.detail}};
}

SummaryResult summary_from_json(const nlohmann::json& j) {
  SummaryResult r;
  for (const auto& s : j.at("snippets")) r.snippets.push_back(snippet::Snippet::from_json(s));
  const auto status = j.at("status").get<std::string>();
  if (status == "retriever_error") {
    r.status = ExecStatus::retriever_error(j.at("detail").get<std::string>());
  }
  return r;
}

}  // namespace

void Transcript::put(const std::string& role, const nlohmann::json& request,
                     nlohmann::json response) {
  std::lock_guard lock(mu_);
  entries_[role][request.dump()] = std::move(response);
}

const nlohmann::json& Transcript::get(const std::string& role,
                                      const nlohmann::json& request) const {
  std::lock_guard lock(mu_);
  auto r = entries_.find(role);
  if (r != entries_.end()) {
    auto it = r->second.find(request.dump());
    if (it != r->second.end()) return it->second;
  }
  throw Error("replay: no recorded " + role + " response for this request");
}

nlohmann::json Transcript::to_json() const {
  std::lock_guard lock(mu_);
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [role, pairs] : entries_) {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& [key, response] : pairs) {
      list.push_back({{"request", nlohmann::json::parse(key)}, {"response", response}});
    }
    out[role] = std::move(list);
  }
  return out;
}

Transcript Transcript::from_json(const nlohmann::json& j) {
  Transcript t;
  for (const auto& [role, list] : j.items()) {
    for (const auto& pair : list) t.put(role, pair.at("request"), pair.at("response"));
  }
  return t;
}

SubInstruction RecordingPlanner::next(const PlannerRequest& request) {
  try {
    SubInstruction sub = inner_.next(request);
    out_.put("planner", request.to_json(), sub.to_json());
    return sub;
  } catch (const PlanError& e) {
    out_.put("planner", request.to_json(), {{"plan_error", e.what()}});
    throw;
  }
}

SummaryResult RecordingSummarizer::summarize(const SubInstruction& sub,
                                             const std::string& page_html) {
  SummaryResult r = inner_.summarize(sub, page_html);
  out_.put("summarizer", summary_request(sub, page_html), summary_json(r));
  return r;
}

std::string RecordingProgrammer::write(const SubInstruction& sub,
                                       std::span<const snippet::Snippet> snippets) {
  std::string program = inner_.write(sub, snippets);
  out_.put("programmer", program_request(sub, snippets), program);
  return program;
}

SubInstruction ReplayPlanner::next(const PlannerRequest& request) {
  const auto& j = t_.get("planner", request.to_json());
  if (j.contains("plan_error")) throw PlanError(j.at("plan_error").get<std::string>());
  return SubInstruction::from_json(j);
}

SummaryResult ReplaySummarizer::summarize(const SubInstruction& sub,
                                          const std::string& page_html) {
  return summary_from_json(t_.get("summarizer", summary_request(sub, page_html)));
}

std::string ReplayProgrammer::write(const SubInstruction& sub,
                                    std::span<const snippet::Snippet> snippets) {
  return t_.get("programmer", program_request(sub, snippets)).get<std::string>();
}

}  // namespace htmlforge::agent
