#include "htmlforge/dom/html.h"

namespace htmlforge::dom {

namespace {

void escape_text(std::string& out, std::string_view s) {
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out.push_back(c);
    }
  }
}

void escape_attr(std::string& out, std::string_view s) {
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
}

void write(std::string& out, const Node& node, bool raw_parent) {
  switch (node.kind) {
    case NodeKind::kText:
      if (raw_parent) {
        out += node.text;
      } else {
        escape_text(out, node.text);
      }
      return;
    case NodeKind::kDocument:
      for (const auto& child : node.children) write(out, child, false);
      return;
    case NodeKind::kElement:
      break;
  }
  out.push_back('<');
  out += node.tag;
  for (const auto& [name, value] : node.attrs) {
    out.push_back(' ');
    out += name;
    out += "=\"";
    escape_attr(out, value);
    out.push_back('"');
  }
  out.push_back('>');
  if (is_void_element(node.tag)) return;
  const bool raw = is_raw_text_element(node.tag);
  for (const auto& child : node.children) write(out, child, raw);
  out += "</";
  out += node.tag;
  out.push_back('>');
}

}  // namespace

std::string serialize(const Node& node) {
  std::string out;
  write(out, node, false);
  return out;
}

}  // namespace htmlforge::dom
