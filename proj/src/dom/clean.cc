#include "htmlforge/dom/html.h"

namespace htmlforge::dom {

CleaningConfig CleaningConfig::defaults() {
  CleaningConfig cfg;
  cfg.remove_tags = {"script", "meta", "style", "noscript", "link"};
  cfg.keep_attrs = {"id", "type", "value", "class", "for", "data-ref"};
  return cfg;
}

namespace {

Node clean_impl(const Node& node, const CleaningConfig& cfg) {
  Node out;
  out.kind = node.kind;
  out.tag = node.tag;
  out.text = node.text;
  if (node.is_element()) {
    for (const auto& attr : node.attrs) {
      if (cfg.keep_attrs.contains(attr.first)) out.attrs.push_back(attr);
    }
    if (cfg.keep_attrs.contains("data-ref")) out.data_ref = node.data_ref;
  }
  for (const auto& child : node.children) {
    if (child.is_element() && cfg.remove_tags.contains(child.tag)) continue;
    if (child.is_text() && !out.children.empty() &&
        out.children.back().is_text()) {
      out.children.back().text += child.text;
      continue;
    }
    out.children.push_back(clean_impl(child, cfg));
  }
  return out;
}

void annotate_impl(Node& node, std::uint32_t& next) {
  if (node.is_element()) {
    node.data_ref = next;
    node.set_attr("data-ref", std::to_string(next));
    ++next;
  }
  for (auto& child : node.children) annotate_impl(child, next);
}

}  // namespace

Node clean(const Node& doc, const CleaningConfig& cfg) {
  return clean_impl(doc, cfg);
}

Node annotate_refs(const Node& doc) {
  Node out = doc;
  std::uint32_t next = 0;
  annotate_impl(out, next);
  return out;
}

}  // namespace htmlforge::dom
