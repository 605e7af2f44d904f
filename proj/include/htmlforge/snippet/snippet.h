#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "htmlforge/dom/node.h"
#include "htmlforge/dom/tokenizer.h"
#include "json.hpp"

namespace htmlforge::snippet {

/// Level used when `truncate_only` cuts the whole document instead of
/// expanding around the anchor.
inline constexpr int kWholeDocumentLevel = -1;

struct Snippet {
  std::int64_t anchor_ref = 0;
  std::string html;
  std::size_t token_count = 0;
  int expansion_level = 0;  // 0 element, 1 parent, 2 grandparent
  bool tail_truncated = false;

  /// {"anchor_ref","expansion_level","tail_truncated","token_count","html"}
  nlohmann::json to_json() const;
  static Snippet from_json(const nlohmann::json& j);
  friend bool operator==(const Snippet&, const Snippet&) = default;
};

struct SnippetOptions {
  /// Skip ancestor expansion and cut the serialized document to budget.
  bool truncate_only = false;
  const Tokenizer* tokenizer = nullptr;  // nullptr: default_tokenizer()
};

/// Element whose data_ref equals `ref`; throws RetrieverError otherwise.
const dom::Node& resolve_ref(const dom::Node& doc, std::int64_t ref);

/// Snippet around `ref` of at most `budget` tokens.
///
/// Tries the grandparent subtree, then the parent, then the element. Only
/// element ancestors count, so a top-level element has none. When even
/// the element is over budget its serialization is cut after `budget`
/// tokens and tail_truncated is set.
Snippet expand_to_budget(const dom::Node& doc, std::int64_t ref, std::size_t budget,
                         const SnippetOptions& options = {});

/// `budget` split into `parts` near-equal shares, remainder to the front.
std::vector<std::size_t> split_budget(std::size_t budget, std::size_t parts);

struct BatchResult {
  std::vector<Snippet> snippets;          // one per resolved ref, in order
  std::vector<std::int64_t> unresolved;   // refs that raised RetrieverError
};

/// One snippet per resolvable ref with the per-ref share of `budget`.
/// Throws RetrieverError when no ref resolves, std::invalid_argument when
/// refs is empty or budget < refs.size().
BatchResult batch_extract(const dom::Node& doc, std::span<const std::int64_t> refs,
                          std::size_t budget, const SnippetOptions& options = {});

}  // namespace htmlforge::snippet
