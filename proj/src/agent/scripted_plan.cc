#include "htmlforge/agent/plan.h"

#include <algorithm>
#include <cctype>

#include "htmlforge/agent/instruction_template.h"
#include "htmlforge/dom/html.h"
#include "htmlforge/util/error.h"

namespace htmlforge::agent {
namespace {

constexpr auto kFlags = std::regex::ECMAScript | std::regex::icase;

std::string trim(std::string_view s) {
  const auto* ws = " \t\r\n\f\v";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::regex compile(const std::string& source, const std::string& field) {
  try {
    return std::regex(source, kFlags);
  } catch (const std::regex_error& e) {
    throw ConfigError(field, std::string("bad regex: ") + e.what());
  }
}

template <typename T>
T get(const nlohmann::json& j, const char* key, const std::string& field) {
  if (!j.contains(key)) throw ConfigError(field + "." + key, "missing");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(field + "." + key, "wrong type");
  }
}

void check_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                const std::string& field) {
  if (!j.is_object()) throw ConfigError(field, "expected an object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(field + "." + key, "unknown key");
  }
}

Locator parse_locator(const nlohmann::json& j, const std::string& field) {
  check_keys(j, {"id", "text"}, field);
  if (j.size() != 1) throw ConfigError(field, "exactly one of id or text");
  if (j.contains("id")) return {Locator::Kind::kId, get<std::string>(j, "id", field)};
  return {Locator::Kind::kText, get<std::string>(j, "text", field)};
}

AttributeRule parse_attribute(const nlohmann::json& j, const std::string& field) {
  check_keys(j, {"name", "patterns", "required", "split", "value_map"}, field);
  AttributeRule a;
  a.name = get<std::string>(j, "name", field);
  const auto& pats = j.contains("patterns") ? j.at("patterns") : nlohmann::json();
  if (!pats.is_array() || pats.empty()) throw ConfigError(field + ".patterns", "non-empty list");
  for (std::size_t i = 0; i < pats.size(); ++i) {
    const std::string pf = field + ".patterns[" + std::to_string(i) + "]";
    check_keys(pats[i], {"regex", "group"}, pf);
    AttributeRule::Pattern p;
    p.source = get<std::string>(pats[i], "regex", pf);
    p.regex = compile(p.source, pf + ".regex");
    p.group = pats[i].value("group", std::size_t{1});
    if (p.group > p.regex.mark_count()) throw ConfigError(pf + ".group", "no such group");
    a.patterns.push_back(std::move(p));
  }
  a.required = j.value("required", false);
  if (j.contains("split")) a.split = compile(get<std::string>(j, "split", field), field + ".split");
  if (j.contains("value_map")) {
    for (const auto& [k, v] : get<std::map<std::string, std::string>>(j, "value_map", field)) {
      a.value_map[lower(k)] = v;
    }
  }
  return a;
}

StepRule parse_step(const nlohmann::json& j, const std::string& field) {
  check_keys(j, {"text", "when", "foreach", "locator"}, field);
  StepRule s;
  s.text = get<std::string>(j, "text", field);
  if (j.contains("when")) {
    const auto& w = j.at("when");
    if (w.is_string()) {
      s.when.push_back(w.get<std::string>());
    } else {
      s.when = get<std::vector<std::string>>(j, "when", field);
    }
  }
  if (j.contains("foreach")) s.foreach = get<std::string>(j, "foreach", field);
  if (j.contains("locator")) s.locator = parse_locator(j.at("locator"), field + ".locator");
  return s;
}

}  // namespace

std::string regex_escape(std::string_view text) {
  static const std::string_view special = R"(\^$.|?*+()[]{})";
  std::string out;
  for (char c : text) {
    if (special.find(c) != std::string_view::npos) out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

std::string expand(const std::string& tmpl, const AttributeMap& attrs, const std::string* item,
                   bool escape) {
  std::string out;
  std::size_t i = 0;
  while (i < tmpl.size()) {
    const char c = tmpl[i];
    if (c != '{' || i + 1 >= tmpl.size() || !is_ident_start(tmpl[i + 1])) {
      out.push_back(c);
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < tmpl.size() && is_ident(tmpl[j])) ++j;
    std::string name = tmpl.substr(i + 1, j - i - 1);
    bool slugged = false;
    if (tmpl.compare(j, 5, "|slug") == 0) {
      slugged = true;
      j += 5;
    }
    if (j >= tmpl.size() || tmpl[j] != '}') {
      out.push_back(c);
      ++i;
      continue;
    }
    std::string value;
    if (name == "item" && item != nullptr) {
      value = *item;
    } else {
      auto it = attrs.find(name);
      if (it == attrs.end()) throw PlanError("template refers to unknown attribute {" + name + "}");
      for (std::size_t k = 0; k < it->second.size(); ++k) {
        if (k) value += ", ";
        value += it->second[k];
      }
    }
    if (slugged) value = slug(value);
    out += escape ? regex_escape(value) : value;
    i = j + 1;
  }
  return out;
}

std::optional<std::vector<std::string>> AttributeRule::extract(
    const std::string& instruction) const {
  for (const auto& p : patterns) {
    std::smatch m;
    if (!std::regex_search(instruction, m, p.regex) || !m[p.group].matched) continue;
    std::string raw = trim(m[p.group].str());
    if (raw.empty()) continue;
    std::vector<std::string> parts;
    if (split) {
      std::sregex_token_iterator it(raw.begin(), raw.end(), *split, -1), end;
      for (; it != end; ++it) {
        std::string part = trim(it->str());
        if (!part.empty()) parts.push_back(std::move(part));
      }
    } else {
      parts.push_back(std::move(raw));
    }
    for (auto& part : parts) {
      auto mapped = value_map.find(lower(part));
      if (mapped != value_map.end()) part = mapped->second;
    }
    if (!parts.empty()) return parts;
  }
  return std::nullopt;
}

RuleSet RuleSet::from_json(const nlohmann::json& j) {
  RuleSet rs;
  if (j.contains("end_marker")) {
    rs.end_marker = get<std::string>(j, "end_marker", "rules");
    if (rs.end_marker.empty()) throw ConfigError("end_marker", "must not be empty");
  }
  const auto& rules = j.contains("rules") ? j.at("rules") : nlohmann::json();
  if (!rules.is_array() || rules.empty()) throw ConfigError("rules", "non-empty list");
  for (std::size_t r = 0; r < rules.size(); ++r) {
    const std::string field = "rules[" + std::to_string(r) + "]";
    const auto& rj = rules[r];
    check_keys(rj, {"name", "match", "attributes", "steps"}, field);
    PlanRule rule;
    rule.name = get<std::string>(rj, "name", field);
    rule.match = compile(get<std::string>(rj, "match", field), field + ".match");
    if (rj.contains("attributes")) {
      const auto& attrs = rj.at("attributes");
      for (std::size_t a = 0; a < attrs.size(); ++a) {
        rule.attributes.push_back(
            parse_attribute(attrs[a], field + ".attributes[" + std::to_string(a) + "]"));
      }
    }
    const auto& steps = rj.contains("steps") ? rj.at("steps") : nlohmann::json();
    if (!steps.is_array() || steps.empty()) throw ConfigError(field + ".steps", "non-empty list");
    for (std::size_t s = 0; s < steps.size(); ++s) {
      rule.steps.push_back(parse_step(steps[s], field + ".steps[" + std::to_string(s) + "]"));
    }
    rs.rules.push_back(std::move(rule));
  }
  return rs;
}

std::vector<SubInstruction> Plan::sub_instructions() const {
  std::vector<SubInstruction> out;
  out.reserve(steps.size());
  for (const auto& s : steps) out.push_back(s.sub);
  return out;
}

Plan scripted_plan(const std::string& instruction, const RuleSet& rules) {
  for (const auto& rule : rules.rules) {
    if (!std::regex_search(instruction, rule.match)) continue;
    AttributeMap extracted;
    bool complete = true;
    for (const auto& a : rule.attributes) {
      auto values = a.extract(instruction);
      if (values) {
        extracted[a.name] = std::move(*values);
      } else if (a.required) {
        complete = false;
        break;
      }
    }
    if (!complete) continue;

    AttributeMap scope = rules.constants;
    for (const auto& [k, v] : extracted) scope[k] = v;

    Plan plan;
    plan.rule = rule.name;
    auto emit = [&](const StepRule& step, const std::string* item) {
      PlannedStep ps;
      ps.sub.text = expand(step.text, scope, item);
      if (step.locator) {
        ps.locator = Locator{step.locator->kind, expand(step.locator->pattern, scope, item)};
      }
      plan.steps.push_back(std::move(ps));
    };
    for (const auto& step : rule.steps) {
      if (!step.when.empty() &&
          std::none_of(step.when.begin(), step.when.end(),
                       [&](const std::string& a) { return extracted.count(a) != 0; })) {
        continue;
      }
      if (step.foreach) {
        auto it = extracted.find(*step.foreach);
        if (it == extracted.end()) continue;
        for (const auto& v : it->second) emit(step, &v);
      } else {
        emit(step, nullptr);
      }
    }
    PlannedStep end;
    end.sub.text = rules.end_marker;
    end.sub.terminal = true;
    plan.steps.push_back(std::move(end));
    plan.attributes = std::move(extracted);
    return plan;
  }
  throw PlanError("no rule matches instruction: " + instruction);
}

std::optional<std::int64_t> locate(const std::string& page_html, const Locator& locator) {
  const dom::Node doc = dom::parse(page_html);
  const std::string wanted = locator.kind == Locator::Kind::kText ? lower(trim(locator.pattern))
                                                                  : locator.pattern;
  std::optional<std::int64_t> found;
  dom::visit_elements(doc, [&](const dom::Node& n, const dom::NodePath&) {
    if (!n.data_ref) return true;
    bool hit = false;
    if (locator.kind == Locator::Kind::kId) {
      const std::string* id = n.attr("id");
      hit = id != nullptr && *id == wanted;
    } else {
      hit = lower(trim(dom::text_content(n))) == wanted;
    }
    if (hit) found = *n.data_ref;
    return !hit;
  });
  return found;
}

}  // namespace htmlforge::agent
