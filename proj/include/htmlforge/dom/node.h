#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace htmlforge::dom {

enum class NodeKind : std::uint8_t { kDocument, kElement, kText };

using Attribute = std::pair<std::string, std::string>;

/// One node of a parsed HTML tree. Children are held by value, so a tree
/// is a plain value: copies are deep and equality is structural.
///
/// Only elements carry `tag`, `attrs` and `data_ref`; only text runs carry
/// `text`. The document root is the only kDocument node.
struct Node {
  NodeKind kind = NodeKind::kElement;
  std::string tag;
  std::string text;
  std::vector<Attribute> attrs;
  std::vector<Node> children;
  std::optional<std::uint32_t> data_ref;

  static Node document(std::vector<Node> children = {});
  static Node element(std::string tag, std::vector<Attribute> attrs = {},
                      std::vector<Node> children = {});
  static Node text_run(std::string text);

  bool is_element() const noexcept { return kind == NodeKind::kElement; }
  bool is_text() const noexcept { return kind == NodeKind::kText; }
  bool is_document() const noexcept { return kind == NodeKind::kDocument; }

  /// Value of the first attribute named `name`, or nullptr.
  const std::string* attr(std::string_view name) const;

  /// Replaces the value of `name` in place, or appends it.
  void set_attr(std::string_view name, std::string value);

  friend bool operator==(const Node&, const Node&) = default;
};

/// Index path from the root: children[path[0]].children[path[1]]...
using NodePath = std::vector<std::size_t>;

/// Element count of the subtree rooted at `node`, including `node`.
std::size_t count_elements(const Node& node);

/// Pre-order visit of every element below and including `root`, with the
/// element's path relative to `root`. Returning false stops the walk.
void visit_elements(
    const Node& root,
    const std::function<bool(const Node&, const NodePath&)>& fn);

/// Node at `path`, or nullptr when the path leaves the tree.
const Node* node_at(const Node& root, const NodePath& path);

/// Concatenated text of all text runs below `node`.
std::string text_content(const Node& node);

bool is_void_element(std::string_view tag);

/// Elements whose content is stored verbatim (no character references).
bool is_raw_text_element(std::string_view tag);

}  // namespace htmlforge::dom
