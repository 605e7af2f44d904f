#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "htmlforge/snippet/snippet.h"
#include "json.hpp"

namespace htmlforge::agent {

/// One step of a decomposed plan. `terminal` is set exactly when `text`
/// is the end-of-episode marker.
struct SubInstruction {
  std::string text;
  std::vector<std::int64_t> refs;
  bool terminal = false;

  nlohmann::json to_json() const;
  static SubInstruction from_json(const nlohmann::json& j);
  friend bool operator==(const SubInstruction&, const SubInstruction&) = default;
};

struct ExecStatus {
  enum class Kind { kOk, kProgramError, kRetrieverError, kBadUrl };
  Kind kind = Kind::kOk;
  std::string detail;  // offending URL for kBadUrl, message otherwise

  static ExecStatus ok() { return {}; }
  static ExecStatus program_error(std::string why) { return {Kind::kProgramError, std::move(why)}; }
  static ExecStatus retriever_error(std::string why) {
    return {Kind::kRetrieverError, std::move(why)};
  }
  static ExecStatus bad_url(std::string url) { return {Kind::kBadUrl, std::move(url)}; }

  bool is_ok() const noexcept { return kind == Kind::kOk; }
  /// "ok", "program_error", "retriever_error" or "bad_url".
  std::string name() const;
  nlohmann::json to_json() const;
  friend bool operator==(const ExecStatus&, const ExecStatus&) = default;
};

struct EpisodeStep {
  SubInstruction sub_instruction;
  std::vector<snippet::Snippet> snippets;
  std::string program;
  ExecStatus exec_status;
  std::string observation_html;  // page the planner saw
  std::string url;               // page after execution
  std::vector<std::string> records;  // executor trace, one line per action

  nlohmann::json to_json() const;
};

struct EpisodeStatus {
  enum class Kind { kSuccess, kScored, kFiltered, kMaxSteps };
  Kind kind = Kind::kSuccess;
  int score = 100;     // kScored only
  std::string reason;  // kFiltered only

  static EpisodeStatus success() { return {}; }
  static EpisodeStatus scored(int s) { return {Kind::kScored, s, {}}; }
  static EpisodeStatus filtered(std::string why) { return {Kind::kFiltered, 0, std::move(why)}; }
  static EpisodeStatus max_steps() { return {Kind::kMaxSteps, 0, {}}; }

  std::string name() const;
  nlohmann::json to_json() const;
  friend bool operator==(const EpisodeStatus&, const EpisodeStatus&) = default;
};

struct Episode {
  std::string instruction;
  std::vector<EpisodeStep> steps;
  EpisodeStatus status;

  nlohmann::json to_json() const;
};

struct ScoreReport {
  std::vector<std::string> required_attrs;
  std::vector<std::string> covered;  // in required order
  int score = 0;
  bool success = false;

  /// Requires a non-empty `required`; covered names outside it are ignored.
  static ScoreReport make(std::vector<std::string> required,
                          const std::vector<std::string>& covered);
  nlohmann::json to_json() const;
};

/// round(100 * covered / required), halves rounded up, in exact integer
/// arithmetic. Requires 0 <= covered <= required and required > 0.
int coverage_score(std::size_t covered, std::size_t required);

}  // namespace htmlforge::agent
