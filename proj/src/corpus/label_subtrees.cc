#include <map>
#include <string>

#include "htmlforge/corpus/pipeline.h"

namespace htmlforge::corpus {

std::vector<dom::Node> extract_label_subtrees(const dom::Node& doc) {
  std::vector<std::pair<std::string, dom::NodePath>> labels;
  std::map<std::string, std::vector<dom::NodePath>, std::less<>> by_id;
  dom::visit_elements(doc, [&](const dom::Node& el, const dom::NodePath& path) {
    if (const std::string* id = el.attr("id"); id && !id->empty()) {
      by_id[*id].push_back(path);
    }
    if (el.tag == "label") {
      if (const std::string* target = el.attr("for"); target && !target->empty()) {
        labels.emplace_back(*target, path);
      }
    }
    return true;
  });

  std::vector<dom::Node> out;
  for (const auto& [target, label_path] : labels) {
    const auto it = by_id.find(target);
    if (it == by_id.end() || it->second.size() != 1) continue;
    const dom::NodePath& target_path = it->second.front();
    dom::NodePath common;
    for (std::size_t i = 0; i < label_path.size() && i < target_path.size() &&
                            label_path[i] == target_path[i];
         ++i) {
      common.push_back(label_path[i]);
    }
    out.push_back(*dom::node_at(doc, common));
  }
  return out;
}

}  // namespace htmlforge::corpus
