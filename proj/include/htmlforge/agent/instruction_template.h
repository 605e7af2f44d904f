#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "htmlforge/util/rng.h"
#include "json.hpp"

namespace htmlforge::agent {

/// Text with <slot> placeholders and candidate values for each slot.
struct InstructionTemplate {
  std::string text;
  std::map<std::string, std::vector<std::string>> slot_values;

  /// Placeholder names in order of appearance, repeats included.
  std::vector<std::string> placeholders() const;
  /// Throws ConfigError for a placeholder with no candidates.
  void validate() const;

  /// {"template": "...", "slot_values": {...}}
  static InstructionTemplate from_json(const nlohmann::json& j);
};

/// Each placeholder replaced by a uniformly drawn candidate. Repeated
/// placeholders draw independently.
std::string sample_instruction(const InstructionTemplate& t, Rng& rng);

/// Lowercase ASCII identifier: '+' becomes "plus", other runs of
/// characters outside [a-z0-9] become one '-', no leading/trailing '-'.
std::string slug(std::string_view text);

}  // namespace htmlforge::agent
