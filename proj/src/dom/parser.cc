#include <algorithm>
#include <array>
#include <charconv>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "htmlforge/dom/html.h"
#include "htmlforge/util/utf8.h"

namespace htmlforge::dom {

namespace {

using TagList = std::initializer_list<std::string_view>;

bool one_of(std::string_view tag, TagList list) {
  return std::find(list.begin(), list.end(), tag) != list.end();
}

using TagSpan = std::span<const std::string_view>;

bool one_of(std::string_view tag, TagSpan list) {
  return std::find(list.begin(), list.end(), tag) != list.end();
}

constexpr std::string_view kClosesParagraph[] = {
    "address", "article", "aside",   "blockquote", "center", "details",
    "dialog",  "dir",     "div",     "dl",         "fieldset",
    "figcaption", "figure", "footer", "header",    "hgroup", "main",
    "menu",    "nav",     "ol",      "p",          "section", "summary",
    "ul",      "h1",      "h2",      "h3",         "h4",     "h5",
    "h6",      "pre",     "listing", "form",       "plaintext",
    "table",   "hr",      "xmp",     "li",         "dd",     "dt"};

constexpr std::string_view kListItem[] = {"li"};
constexpr std::string_view kDefinitionItem[] = {"dd", "dt"};

constexpr std::string_view kHeadings[] = {"h1", "h2", "h3", "h4", "h5", "h6"};

constexpr std::string_view kHeadContent[] = {"title", "meta",     "link",    "script",
                                  "style", "base",     "noscript", "template",
                                  "basefont", "bgsound"};

// Elements whose end tag is matched against the stack of open elements;
// an end tag for anything else stops at the first of these.
constexpr std::string_view kSpecial[] = {
    "address", "applet",  "area",     "article",  "aside",    "base",
    "basefont", "bgsound", "blockquote", "body",  "br",       "button",
    "caption", "center",  "col",      "colgroup", "dd",       "details",
    "dir",     "div",     "dl",       "dt",       "embed",    "fieldset",
    "figcaption", "figure", "footer", "form",     "frame",    "frameset",
    "h1",      "h2",      "h3",       "h4",       "h5",       "h6",
    "head",    "header",  "hgroup",   "hr",       "html",     "iframe",
    "img",     "input",   "keygen",   "li",       "link",     "listing",
    "main",    "marquee", "menu",     "meta",     "nav",      "noembed",
    "noframes", "noscript", "object", "ol",       "p",        "param",
    "plaintext", "pre",   "script",   "section",  "select",   "source",
    "style",   "summary", "table",    "tbody",    "td",       "template",
    "textarea", "tfoot",  "th",       "thead",    "title",    "tr",
    "track",   "ul",      "wbr",      "xmp"};

constexpr std::string_view kDefaultScope[] = {"applet", "caption", "html",    "table",
                                   "td",     "th",      "marquee", "object",
                                   "template"};
constexpr std::string_view kButtonScope[] = {"applet", "caption", "html",    "table",
                                  "td",     "th",      "marquee", "object",
                                  "template", "button"};
constexpr std::string_view kListItemScope[] = {"applet", "caption", "html",    "table",
                                    "td",     "th",      "marquee", "object",
                                    "template", "ol",    "ul"};
constexpr std::string_view kTableScope[] = {"html", "table", "template"};

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f';
}

bool is_alpha(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

char lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

std::optional<std::uint32_t> parse_ref(std::string_view value) {
  if (value.empty()) return std::nullopt;
  std::uint32_t out = 0;
  auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || end != value.data() + value.size()) {
    return std::nullopt;
  }
  return out;
}

struct TagToken {
  std::string name;
  std::vector<Attribute> attrs;
  bool end = false;
  bool self_closing = false;
};

class TreeBuilder {
 public:
  TreeBuilder() : root_(Node::document()) { open_.push_back(&root_); }

  Node finish() { return std::move(root_); }

  void text(std::string_view s) {
    if (s.empty()) return;
    Node& cur = current();
    if (!cur.children.empty() && cur.children.back().is_text()) {
      cur.children.back().text += s;
    } else {
      cur.children.push_back(Node::text_run(std::string(s)));
    }
  }

  // Returns true when the element stays open (its content follows).
  bool start_tag(TagToken& tok) {
    const std::string& tag = tok.name;

    if (tag == "html" || tag == "body" || tag == "head") {
      if (on_stack(tag)) return false;
    }
    if (tag == "body" && current().tag == "head") pop();
    if (on_stack("head") && !one_of(tag, kHeadContent)) pop_until("head");

    if (tag == "form" && on_stack("form")) return false;

    if (tag == "li") {
      close_list_item(kListItem);
    } else if (tag == "dd" || tag == "dt") {
      close_list_item(kDefinitionItem);
    }
    if (one_of(tag, kClosesParagraph) && in_scope("p", kButtonScope)) {
      pop_until("p");
    }
    if (one_of(tag, kHeadings) && one_of(current().tag, kHeadings)) pop();
    if (tag == "a" && on_stack("a")) pop_until("a");
    if (tag == "button" && in_scope("button", kDefaultScope)) {
      pop_until("button");
    }
    if (tag == "option" || tag == "optgroup") {
      if (current().tag == "option") pop();
      if (tag == "optgroup" && current().tag == "optgroup") pop();
    }
    if (tag == "tr" && in_scope("tr", kTableScope)) pop_until("tr");
    if (tag == "td" || tag == "th") {
      for (std::string_view cell : {"td", "th"}) {
        if (in_scope(cell, kTableScope)) {
          pop_until(cell);
          break;
        }
      }
    }
    if (one_of(tag, {"thead", "tbody", "tfoot"})) {
      for (std::string_view section : {"thead", "tbody", "tfoot"}) {
        if (in_scope(section, kTableScope)) {
          pop_until(section);
          break;
        }
      }
    }

    Node el = Node::element(tag, std::move(tok.attrs));
    if (const std::string* ref = el.attr("data-ref")) el.data_ref = parse_ref(*ref);
    Node& parent = current();
    parent.children.push_back(std::move(el));
    if (is_void_element(tag)) return false;
    open_.push_back(&parent.children.back());
    return true;
  }

  void end_tag(const std::string& tag) {
    if (tag == "html" || tag == "body") return;
    if (tag == "br") {
      current().children.push_back(Node::element("br"));
      return;
    }
    if (is_void_element(tag)) return;
    if (tag == "p") {
      if (in_scope("p", kButtonScope)) {
        pop_until("p");
      } else {
        current().children.push_back(Node::element("p"));
      }
      return;
    }
    if (tag == "li") {
      if (in_scope("li", kListItemScope)) pop_until("li");
      return;
    }
    if (one_of(tag, kHeadings)) {
      for (auto it = open_.rbegin(); it + 1 != open_.rend(); ++it) {
        if (one_of((*it)->tag, kHeadings)) {
          while (!one_of(current().tag, kHeadings)) pop();
          pop();
          return;
        }
        if (one_of((*it)->tag, kDefaultScope)) return;
      }
      return;
    }
    if (one_of(tag, kSpecial)) {
      const bool table_part =
          one_of(tag, {"table", "tbody", "thead", "tfoot", "tr"});
      if (in_scope(tag, table_part ? TagSpan(kTableScope) : TagSpan(kDefaultScope))) {
        pop_until(tag);
      }
      return;
    }
    for (std::size_t i = open_.size() - 1; i > 0; --i) {
      const std::string& name = open_[i]->tag;
      if (name == tag) {
        open_.resize(i);
        return;
      }
      if (one_of(name, kSpecial)) return;
    }
  }

 private:
  Node& current() { return *open_.back(); }

  void pop() {
    if (open_.size() > 1) open_.pop_back();
  }

  void pop_until(std::string_view tag) {
    while (open_.size() > 1) {
      const bool hit = current().tag == tag;
      open_.pop_back();
      if (hit) return;
    }
  }

  bool on_stack(std::string_view tag) const {
    for (std::size_t i = 1; i < open_.size(); ++i) {
      if (open_[i]->tag == tag) return true;
    }
    return false;
  }

  bool in_scope(std::string_view tag, TagSpan boundaries) const {
    for (std::size_t i = open_.size() - 1; i > 0; --i) {
      const std::string& name = open_[i]->tag;
      if (name == tag) return true;
      if (one_of(name, boundaries)) return false;
    }
    return false;
  }

  // li closes an open li; dd/dt close an open dd or dt. The search stops at
  // special elements other than address/div/p.
  void close_list_item(TagSpan closes) {
    for (std::size_t i = open_.size() - 1; i > 0; --i) {
      const std::string& name = open_[i]->tag;
      if (one_of(name, closes)) {
        open_.resize(i);
        return;
      }
      if (one_of(name, kSpecial) && !one_of(name, {"address", "div", "p"})) {
        return;
      }
    }
  }

  Node root_;
  std::vector<Node*> open_;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  void run(TreeBuilder& builder) {
    while (pos_ < src_.size()) {
      const std::size_t lt = src_.find('<', pos_);
      if (lt != pos_) {
        const std::size_t stop = lt == std::string_view::npos ? src_.size() : lt;
        builder.text(decode_entities(src_.substr(pos_, stop - pos_)));
        pos_ = stop;
        continue;
      }
      markup(builder);
    }
  }

 private:
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }
  bool at_end() const { return pos_ >= src_.size(); }

  void skip_to_gt() {
    const std::size_t gt = src_.find('>', pos_);
    pos_ = gt == std::string_view::npos ? src_.size() : gt + 1;
  }

  void markup(TreeBuilder& builder) {
    const char next = peek(1);
    if (is_alpha(next)) {
      ++pos_;
      TagToken tok;
      if (!read_tag(tok)) return;
      // Self-closing syntax on non-void elements is ignored, as in HTML5.
      if (builder.start_tag(tok)) maybe_raw_text(tok.name, builder);
      return;
    }
    if (next == '/') {
      if (is_alpha(peek(2))) {
        pos_ += 2;
        TagToken tok;
        tok.end = true;
        if (!read_tag(tok)) return;
        builder.end_tag(tok.name);
        return;
      }
      if (peek(2) == '>') {
        pos_ += 3;
        return;
      }
      pos_ += 2;
      skip_to_gt();
      return;
    }
    if (next == '!') {
      if (src_.substr(pos_, 4) == "<!--") {
        const std::size_t close = src_.find("-->", pos_ + 4);
        pos_ = close == std::string_view::npos ? src_.size() : close + 3;
        return;
      }
      pos_ += 2;
      skip_to_gt();
      return;
    }
    if (next == '?') {
      pos_ += 2;
      skip_to_gt();
      return;
    }
    builder.text("<");
    ++pos_;
  }

  // Reads from just after '<' or '</'. Returns false when EOF cut the tag,
  // in which case the partial tag is dropped.
  bool read_tag(TagToken& tok) {
    while (!at_end() && !is_space(peek()) && peek() != '/' && peek() != '>') {
      tok.name.push_back(lower(peek()));
      ++pos_;
    }
    while (true) {
      while (!at_end() && (is_space(peek()) || peek() == '/')) {
        if (peek() == '/' && peek(1) == '>') {
          tok.self_closing = true;
          ++pos_;
          break;
        }
        ++pos_;
      }
      if (at_end()) return false;
      if (peek() == '>') {
        ++pos_;
        return true;
      }
      std::string name;
      name.push_back(lower(peek()));
      ++pos_;
      while (!at_end() && !is_space(peek()) && peek() != '/' && peek() != '>' &&
             peek() != '=') {
        name.push_back(lower(peek()));
        ++pos_;
      }
      while (!at_end() && is_space(peek())) ++pos_;
      std::string value;
      if (peek() == '=') {
        ++pos_;
        while (!at_end() && is_space(peek())) ++pos_;
        if (at_end()) return false;
        const char q = peek();
        if (q == '"' || q == '\'') {
          const std::size_t close = src_.find(q, pos_ + 1);
          if (close == std::string_view::npos) return false;
          value = decode_entities(src_.substr(pos_ + 1, close - pos_ - 1));
          pos_ = close + 1;
        } else {
          const std::size_t start = pos_;
          while (!at_end() && !is_space(peek()) && peek() != '>') ++pos_;
          value = decode_entities(src_.substr(start, pos_ - start));
        }
      }
      if (at_end()) return false;
      const bool dup = std::any_of(tok.attrs.begin(), tok.attrs.end(),
                                   [&](const Attribute& a) { return a.first == name; });
      if (!dup) tok.attrs.emplace_back(std::move(name), std::move(value));
    }
  }

  void maybe_raw_text(const std::string& tag, TreeBuilder& builder) {
    const bool raw = is_raw_text_element(tag);
    const bool rcdata = tag == "textarea" || tag == "title";
    if (!raw && !rcdata) return;
    std::size_t search = pos_;
    std::size_t close = std::string_view::npos;
    while (true) {
      const std::size_t lt = src_.find("</", search);
      if (lt == std::string_view::npos) break;
      const std::size_t after = lt + 2 + tag.size();
      bool match = after <= src_.size();
      for (std::size_t k = 0; match && k < tag.size(); ++k) {
        match = lower(src_[lt + 2 + k]) == tag[k];
      }
      if (match && after < src_.size() &&
          (is_space(src_[after]) || src_[after] == '/' || src_[after] == '>')) {
        close = lt;
        break;
      }
      search = lt + 2;
    }
    const std::size_t stop = close == std::string_view::npos ? src_.size() : close;
    const std::string_view body = src_.substr(pos_, stop - pos_);
    builder.text(raw ? std::string(body) : decode_entities(body));
    pos_ = stop;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

}  // namespace

Node parse(std::string_view html) {
  utf8::require_valid(html);
  TreeBuilder builder;
  Lexer(html).run(builder);
  return builder.finish();
}

}  // namespace htmlforge::dom
