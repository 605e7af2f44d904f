#pragma once

#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "htmlforge/agent/plan.h"
#include "htmlforge/agent/types.h"
#include "htmlforge/snippet/snippet.h"
#include "json.hpp"

namespace htmlforge::agent {

struct PlannerRequest {
  std::string instruction;
  std::vector<SubInstruction> history;
  std::string page_html;

  nlohmann::json to_json() const;
};

struct SummaryResult {
  std::vector<snippet::Snippet> snippets;
  ExecStatus status;  // ok or retriever_error
};

struct Observation {
  std::string url;
  std::string html;  // annotated page
};

struct ExecResult {
  ExecStatus status;
  Observation observation;
  std::vector<std::string> records;
};

/// Model roles. Implementations used across concurrent episodes must be
/// safe to call concurrently.
class Planner {
 public:
  virtual ~Planner() = default;
  virtual SubInstruction next(const PlannerRequest& request) = 0;
};

class Summarizer {
 public:
  virtual ~Summarizer() = default;
  virtual SummaryResult summarize(const SubInstruction& sub, const std::string& page_html) = 0;
};

class Programmer {
 public:
  virtual ~Programmer() = default;
  virtual std::string write(const SubInstruction& sub,
                            std::span<const snippet::Snippet> snippets) = 0;
};

/// Stateful environment; one instance per episode.
class Executor {
 public:
  virtual ~Executor() = default;
  virtual Observation reset() = 0;
  virtual ExecResult execute(const std::string& program) = 0;
};

/// Follows scripted_plan: step i of the plan is returned once the history
/// holds i entries, with refs located in the current page. Past the end
/// of the plan it returns the end marker.
class ScriptedPlanner final : public Planner {
 public:
  explicit ScriptedPlanner(RuleSet rules) : rules_(std::move(rules)) {}
  SubInstruction next(const PlannerRequest& request) override;

 private:
  RuleSet rules_;
};

/// Snippets via batch_extract. Navigation ("go to ...") and terminal steps
/// need none; any other step without refs, or with an unresolved ref, is
/// a retriever error.
class ScriptedSummarizer final : public Summarizer {
 public:
  explicit ScriptedSummarizer(std::size_t budget = 512) : budget_(budget) {}
  SummaryResult summarize(const SubInstruction& sub, const std::string& page_html) override;

 private:
  std::size_t budget_;
};

/// Maps the sub-instruction verbs "go to U", "type in V into T",
/// "click on T", "submit T" and "scroll down T by Npx" onto the command
/// dialect, with the sub-instruction as a leading comment. Any other text
/// yields a program with no statements.
class ScriptedProgrammer final : public Programmer {
 public:
  std::string write(const SubInstruction& sub,
                    std::span<const snippet::Snippet> snippets) override;
};

/// Request/response pairs keyed by the canonical JSON of the request.
class Transcript {
 public:
  Transcript() = default;
  Transcript(Transcript&& other) noexcept : entries_(std::move(other.entries_)) {}

  void put(const std::string& role, const nlohmann::json& request, nlohmann::json response);
  /// Throws Error when the pair was never recorded.
  const nlohmann::json& get(const std::string& role, const nlohmann::json& request) const;

  nlohmann::json to_json() const;
  static Transcript from_json(const nlohmann::json& j);

 private:
  mutable std::mutex mu_;
  std::map<std::string, std::map<std::string, nlohmann::json>> entries_;
};

class RecordingPlanner final : public Planner {
 public:
  RecordingPlanner(Planner& inner, Transcript& out) : inner_(inner), out_(out) {}
  SubInstruction next(const PlannerRequest& request) override;

 private:
  Planner& inner_;
  Transcript& out_;
};

class RecordingSummarizer final : public Summarizer {
 public:
  RecordingSummarizer(Summarizer& inner, Transcript& out) : inner_(inner), out_(out) {}
  SummaryResult summarize(const SubInstruction& sub, const std::string& page_html) override;

 private:
  Summarizer& inner_;
  Transcript& out_;
};

class RecordingProgrammer final : public Programmer {
 public:
  RecordingProgrammer(Programmer& inner, Transcript& out) : inner_(inner), out_(out) {}
  std::string write(const SubInstruction& sub,
                    std::span<const snippet::Snippet> snippets) override;

 private:
  Programmer& inner_;
  Transcript& out_;
};

class ReplayPlanner final : public Planner {
 public:
  explicit ReplayPlanner(const Transcript& t) : t_(t) {}
  SubInstruction next(const PlannerRequest& request) override;

 private:
  const Transcript& t_;
};

class ReplaySummarizer final : public Summarizer {
 public:
  explicit ReplaySummarizer(const Transcript& t) : t_(t) {}
  SummaryResult summarize(const SubInstruction& sub, const std::string& page_html) override;

 private:
  const Transcript& t_;
};

class ReplayProgrammer final : public Programmer {
 public:
  explicit ReplayProgrammer(const Transcript& t) : t_(t) {}
  std::string write(const SubInstruction& sub,
                    std::span<const snippet::Snippet> snippets) override;

 private:
  const Transcript& t_;
};

}  // namespace htmlforge::agent
