#include "htmlforge/agent/instruction_template.h"

#include "htmlforge/util/error.h"

namespace htmlforge::agent {
namespace {

bool is_slot_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
         c == '_' || c == '-';
}

// Calls on_text for literal runs and on_slot for each <name>. A '<' that
// does not open a well-formed placeholder is literal.
template <typename Text, typename Slot>
void scan(const std::string& text, Text&& on_text, Slot&& on_slot) {
  std::size_t i = 0;
  while (i < text.size()) {
    const std::size_t open = text.find('<', i);
    if (open == std::string::npos) {
      on_text(std::string_view(text).substr(i));
      return;
    }
    std::size_t j = open + 1;
    while (j < text.size() && is_slot_char(text[j])) ++j;
    if (j < text.size() && text[j] == '>' && j > open + 1) {
      on_text(std::string_view(text).substr(i, open - i));
      on_slot(text.substr(open + 1, j - open - 1));
      i = j + 1;
    } else {
      on_text(std::string_view(text).substr(i, open + 1 - i));
      i = open + 1;
    }
  }
}

}  // namespace

std::vector<std::string> InstructionTemplate::placeholders() const {
  std::vector<std::string> out;
  scan(text, [](std::string_view) {}, [&](std::string name) { out.push_back(std::move(name)); });
  return out;
}

void InstructionTemplate::validate() const {
  for (const auto& name : placeholders()) {
    auto it = slot_values.find(name);
    if (it == slot_values.end()) throw ConfigError("slot_values." + name, "unknown placeholder");
    if (it->second.empty()) throw ConfigError("slot_values." + name, "no candidates");
  }
}

InstructionTemplate InstructionTemplate::from_json(const nlohmann::json& j) {
  InstructionTemplate t;
  try {
    t.text = j.at("template").get<std::string>();
    t.slot_values = j.at("slot_values").get<std::map<std::string, std::vector<std::string>>>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("templates", e.what());
  }
  t.validate();
  return t;
}

std::string sample_instruction(const InstructionTemplate& t, Rng& rng) {
  t.validate();
  std::string out;
  scan(
      t.text, [&](std::string_view lit) { out.append(lit); },
      [&](const std::string& name) {
        const auto& values = t.slot_values.at(name);
        out += values[rng.uniform_below(values.size())];
      });
  return out;
}

std::string slug(std::string_view text) {
  std::string out;
  bool pending_dash = false;
  for (char c : text) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    const bool alnum = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
    if (alnum || c == '+') {
      if (pending_dash && !out.empty()) out.push_back('-');
      pending_dash = false;
      if (c == '+') {
        out += "plus";
      } else {
        out.push_back(c);
      }
    } else {
      pending_dash = true;
    }
  }
  return out;
}

}  // namespace htmlforge::agent
