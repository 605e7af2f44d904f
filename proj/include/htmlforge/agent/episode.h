#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "htmlforge/agent/ports.h"
#include "htmlforge/agent/types.h"
#include "json.hpp"

namespace htmlforge::agent {

struct RunPolicy {
  std::size_t max_steps = 30;
  /// Step statuses that end the episode as filtered(<status name>).
  std::set<ExecStatus::Kind> abort_on{ExecStatus::Kind::kProgramError};
};

using Scorer = std::function<ScoreReport(const Episode&)>;

struct Ports {
  Planner& planner;
  Summarizer& summarizer;
  Programmer& programmer;
  Executor& executor;
};

/// Plan, summarize, program, execute until a terminal sub-instruction or
/// max_steps steps. The terminal step is recorded with an empty program.
/// A planner PlanError ends the episode as filtered("plan_error"). On
/// reaching the terminal step the status is success, or scored(n) when a
/// scorer is given and n < 100.
Episode run_episode(const std::string& instruction, Ports ports, const RunPolicy& policy,
                    const Scorer& scorer = {});

/// Required attribute: a name and a regex applied to each trace line.
struct RequiredAttr {
  std::string name;
  std::string predicate;
};

/// Covered attributes are those whose predicate matches some trace line
/// of some step.
ScoreReport score_episode(const Episode& ep, const std::vector<RequiredAttr>& required);

struct KeepDecision {
  std::optional<std::string> drop;  // reason; empty means keep
  bool keep() const noexcept { return !drop.has_value(); }
};

/// Drops filtered episodes, episodes with a program or retriever error
/// step, and episodes that visited a URL outside every allowed prefix.
KeepDecision filter_episode(const Episode& ep, const std::vector<std::string>& url_allow_prefixes);

/// One record per step:
///   {"instruction","history","doc","target","target_refs"}
std::vector<nlohmann::json> export_demonstrations(const std::vector<Episode>& episodes);

/// One JSON line per step: {"episode","instruction","step", ...step fields}.
std::vector<nlohmann::json> episode_log(const Episode& ep, std::size_t episode_index);

}  // namespace htmlforge::agent
