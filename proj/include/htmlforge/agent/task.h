#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "htmlforge/agent/episode.h"
#include "htmlforge/agent/fixture_site.h"
#include "htmlforge/agent/instruction_template.h"
#include "htmlforge/agent/plan.h"
#include "json.hpp"

namespace htmlforge::agent {

/// Task definition file:
///   {"name", "start_url", "templates": [{"template","slot_values"}],
///    "instructions": [...], "rules": [...], "end_marker"?,
///    "required_attr_predicates": {attr: regex template},
///    "url_allow_prefixes": [...], "fixture_site_path", "max_steps",
///    "snippet_budget"?}
/// Predicate templates see {value} and {value|slug} for the attribute
/// itself and {other} for any other plan attribute, regex-escaped.
/// fixture_site_path is relative to the task file.
struct Task {
  std::string name;
  std::string start_url;
  std::vector<InstructionTemplate> templates;
  std::vector<std::string> instructions;
  RuleSet rules;
  std::map<std::string, std::string> required_attr_predicates;
  std::vector<std::string> url_allow_prefixes;
  std::filesystem::path fixture_site_path;
  std::size_t max_steps = 30;
  std::size_t snippet_budget = 512;

  static Task from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
  static Task load(const std::filesystem::path& file);
};

/// Required attributes of a plan: every extracted attribute with a
/// predicate, split attributes expanded to name[i].
std::vector<RequiredAttr> required_attributes(const Plan& plan, const Task& task);

/// The bundled instructions followed by `sampled` template draws. Draw i
/// uses template i mod |templates| and a seed derived from `seed` and i.
std::vector<std::string> task_instructions(const Task& task, std::size_t sampled,
                                           std::uint64_t seed);

struct TaskResult {
  std::vector<Episode> episodes;
  std::vector<std::optional<ScoreReport>> reports;  // empty when unplannable
  std::vector<KeepDecision> decisions;
};

/// Runs every instruction with scripted ports on the task's fixture site.
TaskResult run_task(const Task& task, const std::vector<std::string>& instructions,
                    unsigned jobs = 1);

}  // namespace htmlforge::agent
