#include "htmlforge/dom/node.h"

#include <algorithm>
#include <array>

namespace htmlforge::dom {

Node Node::document(std::vector<Node> children) {
  Node n;
  n.kind = NodeKind::kDocument;
  n.children = std::move(children);
  return n;
}

Node Node::element(std::string tag, std::vector<Attribute> attrs,
                   std::vector<Node> children) {
  Node n;
  n.kind = NodeKind::kElement;
  n.tag = std::move(tag);
  n.attrs = std::move(attrs);
  n.children = std::move(children);
  return n;
}

Node Node::text_run(std::string text) {
  Node n;
  n.kind = NodeKind::kText;
  n.text = std::move(text);
  return n;
}

const std::string* Node::attr(std::string_view name) const {
  for (const auto& [key, value] : attrs) {
    if (key == name) return &value;
  }
  return nullptr;
}

void Node::set_attr(std::string_view name, std::string value) {
  for (auto& [key, existing] : attrs) {
    if (key == name) {
      existing = std::move(value);
      return;
    }
  }
  attrs.emplace_back(std::string(name), std::move(value));
}

std::size_t count_elements(const Node& node) {
  std::size_t n = node.is_element() ? 1 : 0;
  for (const auto& child : node.children) n += count_elements(child);
  return n;
}

namespace {

bool visit_impl(const Node& node, NodePath& path,
                const std::function<bool(const Node&, const NodePath&)>& fn) {
  if (node.is_element() && !fn(node, path)) return false;
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    path.push_back(i);
    const bool go_on = visit_impl(node.children[i], path, fn);
    path.pop_back();
    if (!go_on) return false;
  }
  return true;
}

void text_impl(const Node& node, std::string& out) {
  if (node.is_text()) {
    out += node.text;
    return;
  }
  for (const auto& child : node.children) text_impl(child, out);
}

}  // namespace

void visit_elements(
    const Node& root,
    const std::function<bool(const Node&, const NodePath&)>& fn) {
  NodePath path;
  visit_impl(root, path, fn);
}

const Node* node_at(const Node& root, const NodePath& path) {
  const Node* cur = &root;
  for (std::size_t idx : path) {
    if (idx >= cur->children.size()) return nullptr;
    cur = &cur->children[idx];
  }
  return cur;
}

std::string text_content(const Node& node) {
  std::string out;
  text_impl(node, out);
  return out;
}

bool is_void_element(std::string_view tag) {
  static constexpr std::array<std::string_view, 16> kVoid = {
      "area", "base",  "basefont", "br",   "col",    "embed",
      "hr",   "img",   "input",    "link", "meta",   "param",
      "source", "track", "wbr",    "keygen"};
  return std::find(kVoid.begin(), kVoid.end(), tag) != kVoid.end();
}

bool is_raw_text_element(std::string_view tag) {
  return tag == "script" || tag == "style";
}

}  // namespace htmlforge::dom
