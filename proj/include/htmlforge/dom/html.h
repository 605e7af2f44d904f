#pragma once

#include <set>
#include <string>
#include <string_view>

#include "htmlforge/dom/node.h"

namespace htmlforge::dom {

/// Parses UTF-8 HTML into a tree rooted at a kDocument node.
///
/// Malformed markup is recovered the way HTML5 tree construction recovers
/// it for the common cases: implied end tags for p/li/dt/dd/option/table
/// parts, stray end tags ignored, unclosed elements closed at EOF.
/// Comments and doctypes are dropped. No html/head/body elements are
/// synthesized; the document root plays the role of the implied body.
/// A `data-ref` attribute holding a non-negative integer also sets
/// Node::data_ref. Throws Utf8Error on ill-formed input bytes.
Node parse(std::string_view html);

/// Decodes character references in `text` (named subset and numeric).
std::string decode_entities(std::string_view text);

struct CleaningConfig {
  std::set<std::string, std::less<>> remove_tags;
  std::set<std::string, std::less<>> keep_attrs;

  /// script/meta/style/noscript/link removed; id/type/value/class/for and
  /// data-ref kept.
  static CleaningConfig defaults();
};

/// Drops elements in `remove_tags` with their subtrees, restricts the
/// remaining attributes to `keep_attrs` and merges text runs that became
/// adjacent. Idempotent.
Node clean(const Node& doc, const CleaningConfig& cfg);

/// Numbers every element in pre-order starting at 0 and mirrors the
/// number into a `data-ref` attribute.
Node annotate_refs(const Node& doc);

/// Deterministic HTML text. Attributes keep their stored order; void
/// elements get no end tag; text is escaped except inside script/style.
std::string serialize(const Node& node);

}  // namespace htmlforge::dom
