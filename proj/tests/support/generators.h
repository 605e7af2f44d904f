#pragma once

// Hand-rolled generators for property tests. Every generator is a pure
// function of the Rng state, so a failing case is reproduced by its seed.

#include <string>
#include <vector>

#include "htmlforge/dom/node.h"
#include "htmlforge/dom/tokenizer.h"
#include "htmlforge/util/rng.h"

namespace htmlforge::testing {

inline const std::vector<std::string>& soup_tags() {
  static const std::vector<std::string> tags{
      "div", "p", "span", "a", "ul", "li", "form", "label", "input", "button",
      "table", "tr", "td", "b", "i", "em", "section", "h1", "h2", "img",
      "br", "select", "option", "dl", "dt", "dd", "script", "style", "meta", "noscript"};
  return tags;
}

inline const std::vector<std::string>& soup_attrs() {
  static const std::vector<std::string> attrs{"id", "class", "type", "value", "for",
                                              "style", "href", "onclick", "name", "data-x"};
  return attrs;
}

inline const std::string& pick(const std::vector<std::string>& v, Rng& rng) {
  return v[rng.uniform_below(v.size())];
}

inline std::string random_word(Rng& rng) {
  static const std::vector<std::string> words{
      "home", "rent", "2", "bed", "caf\xc3\xa9", "&amp;", "&lt;x&gt;", "a&b", "x<y",
      "search", "price", "&#169;", "q\"t", "it's", "\xe2\x82\xac", "12100", "ok"};
  return pick(words, rng);
}

/// Arbitrary, often malformed markup: unclosed and stray tags, unquoted
/// and duplicate attributes, entities, raw text elements.
inline std::string random_html_soup(Rng& rng, std::size_t pieces) {
  std::string out;
  for (std::size_t i = 0; i < pieces; ++i) {
    switch (rng.uniform_below(7)) {
      case 0:
      case 1: {
        const std::string& tag = pick(soup_tags(), rng);
        out += "<" + tag;
        const auto n_attrs = rng.uniform_below(3);
        for (std::uint64_t a = 0; a < n_attrs; ++a) {
          out += " " + pick(soup_attrs(), rng);
          switch (rng.uniform_below(3)) {
            case 0: out += "=\"" + random_word(rng) + "\""; break;
            case 1: out += "=v" + std::to_string(rng.uniform_below(9)); break;
            default: break;
          }
        }
        out += rng.uniform_below(8) == 0 ? "/>" : ">";
        if (tag == "script" || tag == "style") out += "if (a < b) x();</" + tag + ">";
        break;
      }
      case 2: out += "</" + pick(soup_tags(), rng) + ">"; break;
      case 3: out += "<!-- note -->"; break;
      default:
        out += random_word(rng);
        out += rng.uniform_below(2) ? " " : "\n";
        break;
    }
  }
  return out;
}

/// Well-formed tree whose serialization parses back to itself: no raw
/// text elements, no adjacent text runs, no empty text, no elements the
/// parser would restructure.
inline dom::Node random_tree(Rng& rng, int depth, std::size_t max_children = 4) {
  static const std::vector<std::string> containers{"div", "span", "section", "b", "em", "label",
                                                   "ul", "article"};
  static const std::vector<std::string> leaves{"input", "br", "img", "hr"};
  dom::Node node = dom::Node::element(pick(containers, rng));
  if (rng.uniform_below(2)) node.attrs.emplace_back("id", "n" + std::to_string(rng.next() % 1000));
  if (rng.uniform_below(3) == 0) node.attrs.emplace_back("class", random_word(rng));
  const auto n = depth > 0 ? rng.uniform_below(max_children + 1) : 0;
  bool last_text = false;
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto kind = rng.uniform_below(4);
    if (kind == 0 && !last_text) {
      node.children.push_back(dom::Node::text_run(random_word(rng) + " " + random_word(rng)));
      last_text = true;
    } else if (kind == 1) {
      dom::Node leaf = dom::Node::element(pick(leaves, rng));
      leaf.attrs.emplace_back("type", "text");
      node.children.push_back(std::move(leaf));
      last_text = false;
    } else {
      node.children.push_back(random_tree(rng, depth - 1, max_children));
      last_text = false;
    }
  }
  return node;
}

inline dom::Node random_document(Rng& rng, int depth) {
  dom::Node doc = dom::Node::document();
  const auto n = 1 + rng.uniform_below(3);
  for (std::uint64_t i = 0; i < n; ++i) doc.children.push_back(random_tree(rng, depth));
  return doc;
}

/// Token sequence of the given length over a small vocabulary that also
/// contains sentinel-like literals.
inline TokenSeq random_tokens(Rng& rng, std::size_t length, std::string doc_id = "doc") {
  static const std::vector<std::string> vocab{"<", ">", "div", "p", "id", "=", "\"", "/",
                                              "price", "rent", "a", "b", "<extra_id_0>",
                                              "\\<extra_id_3>"};
  TokenSeq seq;
  seq.doc_id = std::move(doc_id);
  seq.tokens.reserve(length);
  for (std::size_t i = 0; i < length; ++i) {
    seq.tokens.push_back(pick(vocab, rng));
    seq.spacing.push_back(i == 0 ? "" : " ");
  }
  return seq;
}

}  // namespace htmlforge::testing
