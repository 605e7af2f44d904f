#include "htmlforge/agent/task.h"

#include <fstream>

#include "htmlforge/util/error.h"
#include "htmlforge/util/parallel.h"

namespace htmlforge::agent {
namespace {

namespace fs = std::filesystem;

template <typename T>
T field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(key, "missing");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(key, "wrong type");
  }
}

}  // namespace

Task Task::from_json(const nlohmann::json& j, const fs::path& base_dir) {
  static const std::set<std::string> known{
      "name",    "start_url",          "templates",        "instructions",
      "rules",   "end_marker",         "required_attr_predicates",
      "url_allow_prefixes", "fixture_site_path", "max_steps", "snippet_budget"};
  if (!j.is_object()) throw ConfigError("task", "expected an object");
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) throw ConfigError(key, "unknown key");
  }
  Task t;
  t.name = field<std::string>(j, "name");
  t.start_url = field<std::string>(j, "start_url");
  if (j.contains("templates")) {
    for (const auto& tj : j.at("templates")) t.templates.push_back(InstructionTemplate::from_json(tj));
  }
  if (j.contains("instructions")) t.instructions = field<std::vector<std::string>>(j, "instructions");
  t.rules = RuleSet::from_json(j);
  t.rules.constants["start_url"] = {t.start_url};
  t.required_attr_predicates =
      field<std::map<std::string, std::string>>(j, "required_attr_predicates");
  t.url_allow_prefixes = field<std::vector<std::string>>(j, "url_allow_prefixes");
  t.fixture_site_path = base_dir / field<std::string>(j, "fixture_site_path");
  t.max_steps = field<std::size_t>(j, "max_steps");
  if (t.max_steps == 0) throw ConfigError("max_steps", "must be >= 1");
  if (j.contains("snippet_budget")) t.snippet_budget = field<std::size_t>(j, "snippet_budget");
  if (t.snippet_budget == 0) throw ConfigError("snippet_budget", "must be >= 1");
  return t;
}

Task Task::load(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("task", "cannot read " + file.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("task", file.string() + ": " + e.what());
  }
  return from_json(j, file.parent_path());
}

std::vector<RequiredAttr> required_attributes(const Plan& plan, const Task& task) {
  std::vector<RequiredAttr> out;
  AttributeMap scope = task.rules.constants;
  for (const auto& [k, v] : plan.attributes) scope[k] = v;
  for (const auto& [name, values] : plan.attributes) {
    auto pred = task.required_attr_predicates.find(name);
    if (pred == task.required_attr_predicates.end()) continue;
    for (std::size_t i = 0; i < values.size(); ++i) {
      scope["value"] = {values[i]};
      const std::string label = values.size() == 1 ? name : name + "[" + std::to_string(i) + "]";
      out.push_back({label, expand(pred->second, scope, nullptr, true)});
    }
  }
  return out;
}

std::vector<std::string> task_instructions(const Task& task, std::size_t sampled,
                                           std::uint64_t seed) {
  std::vector<std::string> out = task.instructions;
  if (sampled > 0 && task.templates.empty()) throw ConfigError("templates", "nothing to sample");
  for (std::size_t i = 0; i < sampled; ++i) {
    Rng rng(derive_seed(seed, task.name + "#" + std::to_string(i)));
    out.push_back(sample_instruction(task.templates[i % task.templates.size()], rng));
  }
  return out;
}

TaskResult run_task(const Task& task, const std::vector<std::string>& instructions,
                    unsigned jobs) {
  const auto site = FixtureSite::load(task.fixture_site_path);
  ScriptedPlanner planner(task.rules);
  ScriptedSummarizer summarizer(task.snippet_budget);
  ScriptedProgrammer programmer;
  RunPolicy policy;
  policy.max_steps = task.max_steps;

  TaskResult result;
  result.episodes.resize(instructions.size());
  result.reports.resize(instructions.size());
  result.decisions.resize(instructions.size());
  parallel_for(instructions.size(), jobs, [&](std::size_t i) {
    std::vector<RequiredAttr> required;
    try {
      required = required_attributes(scripted_plan(instructions[i], task.rules), task);
    } catch (const PlanError&) {
      // run_episode reports the same failure as filtered("plan_error").
    }
    Scorer scorer;
    if (!required.empty()) {
      scorer = [&required](const Episode& ep) { return score_episode(ep, required); };
    }
    FixtureExecutor executor(site);
    Episode ep = run_episode(instructions[i], {planner, summarizer, programmer, executor}, policy,
                             scorer);
    if (ep.status.kind != EpisodeStatus::Kind::kFiltered && !required.empty()) {
      result.reports[i] = score_episode(ep, required);
    }
    result.decisions[i] = filter_episode(ep, task.url_allow_prefixes);
    result.episodes[i] = std::move(ep);
  });
  return result;
}

}  // namespace htmlforge::agent
