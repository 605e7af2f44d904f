#include "htmlforge/agent/episode.h"

#include <stdexcept>

#include "htmlforge/util/error.h"

namespace htmlforge::agent {
namespace {

bool aborts(const RunPolicy& policy, const ExecStatus& s) {
  return !s.is_ok() && policy.abort_on.count(s.kind) != 0;
}

bool has_prefix(const std::string& url, const std::vector<std::string>& prefixes) {
  for (const auto& p : prefixes) {
    if (url.compare(0, p.size(), p) == 0) return true;
  }
  return false;
}

}  // namespace

Episode run_episode(const std::string& instruction, Ports ports, const RunPolicy& policy,
                    const Scorer& scorer) {
  if (policy.max_steps == 0) throw std::invalid_argument("max_steps must be >= 1");
  Episode ep;
  ep.instruction = instruction;
  Observation obs = ports.executor.reset();
  std::vector<SubInstruction> history;

  while (ep.steps.size() < policy.max_steps) {
    EpisodeStep step;
    step.observation_html = obs.html;
    try {
      step.sub_instruction = ports.planner.next({instruction, history, obs.html});
    } catch (const PlanError&) {
      ep.status = EpisodeStatus::filtered("plan_error");
      return ep;
    }
    if (step.sub_instruction.terminal) {
      step.url = obs.url;
      ep.steps.push_back(std::move(step));
      ep.status = EpisodeStatus::success();
      if (scorer) {
        const ScoreReport report = scorer(ep);
        if (!report.success) ep.status = EpisodeStatus::scored(report.score);
      }
      return ep;
    }

    SummaryResult summary = ports.summarizer.summarize(step.sub_instruction, obs.html);
    step.snippets = std::move(summary.snippets);
    if (aborts(policy, summary.status)) {
      step.exec_status = summary.status;
      step.url = obs.url;
      ep.steps.push_back(std::move(step));
      ep.status = EpisodeStatus::filtered(summary.status.name());
      return ep;
    }
    step.program = ports.programmer.write(step.sub_instruction, step.snippets);
    ExecResult result = ports.executor.execute(step.program);
    step.exec_status = summary.status.is_ok() ? result.status : summary.status;
    step.records = std::move(result.records);
    step.url = result.observation.url;
    obs = std::move(result.observation);
    history.push_back(step.sub_instruction);
    const bool abort = aborts(policy, result.status);
    ep.steps.push_back(std::move(step));
    if (abort) {
      ep.status = EpisodeStatus::filtered(result.status.name());
      return ep;
    }
  }
  ep.status = EpisodeStatus::max_steps();
  return ep;
}

KeepDecision filter_episode(const Episode& ep, const std::vector<std::string>& url_allow_prefixes) {
  if (ep.status.kind == EpisodeStatus::Kind::kFiltered) return {ep.status.reason};
  for (const auto& step : ep.steps) {
    if (!step.exec_status.is_ok()) return {step.exec_status.name()};
    if (step.url != "about:blank" && !has_prefix(step.url, url_allow_prefixes)) {
      return {std::string("url_prefix")};
    }
  }
  return {};
}

std::vector<nlohmann::json> export_demonstrations(const std::vector<Episode>& episodes) {
  std::vector<nlohmann::json> out;
  for (const auto& ep : episodes) {
    nlohmann::json history = nlohmann::json::array();
    for (const auto& step : ep.steps) {
      out.push_back({{"instruction", ep.instruction},
                     {"history", history},
                     {"doc", step.observation_html},
                     {"target", step.sub_instruction.text},
                     {"target_refs", step.sub_instruction.refs}});
      history.push_back(step.sub_instruction.text);
    }
  }
  return out;
}

std::vector<nlohmann::json> episode_log(const Episode& ep, std::size_t episode_index) {
  std::vector<nlohmann::json> out;
  for (std::size_t i = 0; i < ep.steps.size(); ++i) {
    nlohmann::json line{{"episode", episode_index},
                        {"instruction", ep.instruction},
                        {"episode_status", ep.status.to_json()},
                        {"step", i}};
    line.update(ep.steps[i].to_json());
    out.push_back(std::move(line));
  }
  return out;
}

}  // namespace htmlforge::agent
