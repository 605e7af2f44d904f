#include <regex>

#include "htmlforge/agent/ports.h"
#include "htmlforge/agent/program.h"
#include "htmlforge/dom/html.h"
#include "htmlforge/util/error.h"

namespace htmlforge::agent {
namespace {

bool is_navigation(const std::string& text) { return text.rfind("go to ", 0) == 0; }

}  // namespace

nlohmann::json PlannerRequest::to_json() const {
  nlohmann::json h = nlohmann::json::array();
  for (const auto& s : history) h.push_back(s.to_json());
  return {{"instruction", instruction}, {"history", std::move(h)}, {"page_html", page_html}};
}

SubInstruction ScriptedPlanner::next(const PlannerRequest& request) {
  const Plan plan = scripted_plan(request.instruction, rules_);
  if (request.history.size() >= plan.steps.size()) {
    return plan.steps.back().sub;
  }
  const PlannedStep& step = plan.steps[request.history.size()];
  SubInstruction sub = step.sub;
  if (step.locator) {
    if (auto ref = locate(request.page_html, *step.locator)) sub.refs.push_back(*ref);
  }
  return sub;
}

SummaryResult ScriptedSummarizer::summarize(const SubInstruction& sub,
                                            const std::string& page_html) {
  SummaryResult out;
  if (sub.terminal || is_navigation(sub.text)) return out;
  if (sub.refs.empty()) {
    out.status = ExecStatus::retriever_error("no element located for: " + sub.text);
    return out;
  }
  try {
    const dom::Node doc = dom::parse(page_html);
    auto batch = snippet::batch_extract(doc, sub.refs, std::max(budget_, sub.refs.size()));
    out.snippets = std::move(batch.snippets);
    if (!batch.unresolved.empty()) {
      out.status = ExecStatus::retriever_error("unresolved data-ref " +
                                               std::to_string(batch.unresolved.front()));
    }
  } catch (const RetrieverError& e) {
    out.status = ExecStatus::retriever_error(e.what());
  }
  return out;
}

std::string ScriptedProgrammer::write(const SubInstruction& sub,
                                      std::span<const snippet::Snippet> snippets) {
  static const std::regex go_to(R"(^go to (\S+)$)");
  static const std::regex type_in(R"(^type in (.+) into (.+)$)");
  static const std::regex click_on(R"(^click on (.+)$)");
  static const std::regex submit(R"(^submit (.+)$)");
  static const std::regex scroll(R"(^scroll down (.+) by (-?\d+)px$)");

  std::string out = "# " + sub.text + "\n";
  std::smatch m;
  if (std::regex_match(sub.text, m, go_to)) {
    return out + render({Command::Verb::kGet, -1, m[1].str()}) + "\n";
  }
  // Element verbs act on the first snippet anchor, else the planner's ref.
  std::int64_t ref = -1;
  if (!snippets.empty()) {
    ref = snippets.front().anchor_ref;
  } else if (!sub.refs.empty()) {
    ref = sub.refs.front();
  }
  if (ref < 0) return out;
  if (std::regex_match(sub.text, m, type_in)) {
    out += render({Command::Verb::kClear, ref, {}}) + "\n";
    out += render({Command::Verb::kSendKeys, ref, m[1].str()}) + "\n";
  } else if (std::regex_match(sub.text, m, scroll)) {
    out += render({Command::Verb::kScroll, ref, m[2].str()}) + "\n";
  } else if (std::regex_match(sub.text, m, click_on)) {
    out += render({Command::Verb::kClick, ref, {}}) + "\n";
  } else if (std::regex_match(sub.text, m, submit)) {
    out += render({Command::Verb::kSubmit, ref, {}}) + "\n";
  }
  return out;
}

}  // namespace htmlforge::agent
