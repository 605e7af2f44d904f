#pragma once

#include <map>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "htmlforge/agent/types.h"
#include "json.hpp"

namespace htmlforge::agent {

/// Attribute values pulled from an instruction. Single-valued attributes
/// hold one entry; split attributes hold one entry per item.
using AttributeMap = std::map<std::string, std::vector<std::string>>;

/// Expands {name} and {name|slug} from `attrs`; a multi-valued name
/// joins its values with ", ". {item} refers to `item` when given. Braces
/// not holding an identifier (regex quantifiers) are literal. With
/// `regex_escape` the substituted values are escaped for std::regex.
/// Throws PlanError on an unknown name.
std::string expand(const std::string& tmpl, const AttributeMap& attrs,
                   const std::string* item = nullptr, bool regex_escape = false);

std::string regex_escape(std::string_view text);

struct AttributeRule {
  struct Pattern {
    std::string source;
    std::regex regex;
    std::size_t group = 1;
  };
  std::string name;
  std::vector<Pattern> patterns;  // first match wins
  bool required = false;
  std::optional<std::regex> split;
  std::map<std::string, std::string> value_map;  // lowercase key

  std::optional<std::vector<std::string>> extract(const std::string& instruction) const;
};

/// How the planner finds the element a step acts on in the current page.
struct Locator {
  enum class Kind { kId, kText };
  Kind kind = Kind::kId;
  std::string pattern;  // template expanded against the attributes
};

struct StepRule {
  std::string text;
  std::vector<std::string> when;       // step kept if any is present
  std::optional<std::string> foreach;  // attribute iterated as {item}
  std::optional<Locator> locator;
};

struct PlanRule {
  std::string name;
  std::regex match;
  std::vector<AttributeRule> attributes;
  std::vector<StepRule> steps;
};

struct RuleSet {
  std::vector<PlanRule> rules;
  std::string end_marker = "END";
  /// Attributes every plan sees, e.g. start_url.
  AttributeMap constants;

  /// {"end_marker"?, "rules": [...]}; throws ConfigError naming the field.
  static RuleSet from_json(const nlohmann::json& j);
};

struct PlannedStep {
  SubInstruction sub;                   // refs empty until located
  std::optional<Locator> locator;       // expanded
};

struct Plan {
  std::string rule;
  AttributeMap attributes;  // extracted only, constants excluded
  std::vector<PlannedStep> steps;  // last one terminal

  std::vector<SubInstruction> sub_instructions() const;
};

/// Decomposes `instruction` with the first rule whose gate matches and
/// whose required attributes are all found. Throws PlanError otherwise.
Plan scripted_plan(const std::string& instruction, const RuleSet& rules);

/// data_ref of the first element the locator selects in annotated page
/// HTML, if any. Id locators match the whole id; text locators match the
/// trimmed text content case-insensitively.
std::optional<std::int64_t> locate(const std::string& page_html, const Locator& locator);

}  // namespace htmlforge::agent
