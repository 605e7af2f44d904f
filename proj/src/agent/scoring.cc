#include <regex>

#include "htmlforge/agent/episode.h"
#include "htmlforge/util/error.h"

namespace htmlforge::agent {

ScoreReport score_episode(const Episode& ep, const std::vector<RequiredAttr>& required) {
  std::vector<std::string> names;
  std::vector<std::string> covered;
  for (const auto& attr : required) {
    names.push_back(attr.name);
    std::regex predicate;
    try {
      predicate = std::regex(attr.predicate, std::regex::ECMAScript | std::regex::icase);
    } catch (const std::regex_error& e) {
      throw ConfigError("required_attr_predicates." + attr.name, e.what());
    }
    bool hit = false;
    for (const auto& step : ep.steps) {
      for (const auto& rec : step.records) {
        if (std::regex_search(rec, predicate)) {
          hit = true;
          break;
        }
      }
      if (hit) break;
    }
    if (hit) covered.push_back(attr.name);
  }
  return ScoreReport::make(std::move(names), covered);
}

}  // namespace htmlforge::agent
