#include "htmlforge/snippet/snippet.h"

#include <optional>
#include <stdexcept>

#include "htmlforge/dom/html.h"
#include "htmlforge/util/error.h"

namespace htmlforge::snippet {

namespace {

std::optional<dom::NodePath> find_ref(const dom::Node& doc, std::int64_t ref) {
  std::optional<dom::NodePath> found;
  if (ref < 0) return found;
  dom::visit_elements(doc, [&](const dom::Node& el, const dom::NodePath& path) {
    if (el.data_ref && static_cast<std::int64_t>(*el.data_ref) == ref) {
      found = path;
      return false;
    }
    return true;
  });
  return found;
}

const Tokenizer& pick(const SnippetOptions& options) {
  return options.tokenizer ? *options.tokenizer : default_tokenizer();
}

Snippet cut_to_budget(const Tokenizer& tok, std::int64_t ref, const std::string& html,
                      std::size_t budget, int level) {
  TokenSeq seq = tok.tokenize(html);
  Snippet s;
  s.anchor_ref = ref;
  s.expansion_level = level;
  if (seq.size() <= budget) {
    s.html = html;
    s.token_count = seq.size();
    return s;
  }
  seq.tokens.resize(budget);
  seq.spacing.resize(budget);
  seq.trailing.clear();
  s.html = tok.detokenize(seq);
  s.token_count = budget;
  s.tail_truncated = true;
  return s;
}

}  // namespace

nlohmann::json Snippet::to_json() const {
  return nlohmann::json{{"anchor_ref", anchor_ref},
                        {"expansion_level", expansion_level},
                        {"tail_truncated", tail_truncated},
                        {"token_count", token_count},
                        {"html", html}};
}

Snippet Snippet::from_json(const nlohmann::json& j) {
  Snippet s;
  s.anchor_ref = j.at("anchor_ref").get<std::int64_t>();
  s.expansion_level = j.at("expansion_level").get<int>();
  s.tail_truncated = j.at("tail_truncated").get<bool>();
  s.token_count = j.at("token_count").get<std::size_t>();
  s.html = j.at("html").get<std::string>();
  return s;
}

const dom::Node& resolve_ref(const dom::Node& doc, std::int64_t ref) {
  const auto path = find_ref(doc, ref);
  if (!path) throw RetrieverError("unknown data-ref " + std::to_string(ref));
  return *dom::node_at(doc, *path);
}

Snippet expand_to_budget(const dom::Node& doc, std::int64_t ref, std::size_t budget,
                         const SnippetOptions& options) {
  if (budget == 0) throw std::invalid_argument("expand_to_budget: budget must be >= 1");
  const auto path = find_ref(doc, ref);
  if (!path) throw RetrieverError("unknown data-ref " + std::to_string(ref));
  const Tokenizer& tok = pick(options);

  if (options.truncate_only) {
    return cut_to_budget(tok, ref, dom::serialize(doc), budget, kWholeDocumentLevel);
  }

  // Element ancestors available above the anchor, capped at two.
  int levels = 0;
  for (std::size_t up = 1; up <= 2 && up <= path->size(); ++up) {
    const dom::NodePath ancestor(path->begin(), path->end() - static_cast<long>(up));
    if (!dom::node_at(doc, ancestor)->is_element()) break;
    levels = static_cast<int>(up);
  }
  for (int level = levels; level >= 1; --level) {
    const dom::NodePath ancestor(path->begin(), path->end() - level);
    std::string html = dom::serialize(*dom::node_at(doc, ancestor));
    const std::size_t count = tok.count(html);
    if (count <= budget) {
      Snippet s;
      s.anchor_ref = ref;
      s.html = std::move(html);
      s.token_count = count;
      s.expansion_level = level;
      return s;
    }
  }
  return cut_to_budget(tok, ref, dom::serialize(*dom::node_at(doc, *path)), budget, 0);
}

std::vector<std::size_t> split_budget(std::size_t budget, std::size_t parts) {
  std::vector<std::size_t> shares(parts, parts ? budget / parts : 0);
  for (std::size_t i = 0; parts && i < budget % parts; ++i) ++shares[i];
  return shares;
}

BatchResult batch_extract(const dom::Node& doc, std::span<const std::int64_t> refs,
                          std::size_t budget, const SnippetOptions& options) {
  if (refs.empty()) throw std::invalid_argument("batch_extract: refs must be non-empty");
  if (budget < refs.size()) {
    throw std::invalid_argument("batch_extract: budget smaller than the number of refs");
  }
  const std::vector<std::size_t> shares = split_budget(budget, refs.size());
  BatchResult out;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    try {
      out.snippets.push_back(expand_to_budget(doc, refs[i], shares[i], options));
    } catch (const RetrieverError&) {
      out.unresolved.push_back(refs[i]);
    }
  }
  if (out.snippets.empty()) {
    throw RetrieverError("none of " + std::to_string(refs.size()) + " refs resolved");
  }
  return out;
}

}  // namespace htmlforge::snippet
