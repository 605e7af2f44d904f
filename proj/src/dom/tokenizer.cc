#include "htmlforge/dom/tokenizer.h"

namespace htmlforge {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool is_delimiter(char c) {
  return c == '<' || c == '>' || c == '=' || c == '"' || c == '/';
}

}  // namespace

nlohmann::json TokenSeq::to_json() const {
  return nlohmann::json{{"doc_id", doc_id}, {"tokens", tokens}};
}

std::string Tokenizer::detokenize(const TokenSeq& seq) const {
  std::string out;
  for (std::size_t i = 0; i < seq.tokens.size(); ++i) {
    if (i < seq.spacing.size()) out += seq.spacing[i];
    out += seq.tokens[i];
  }
  out += seq.trailing;
  return out;
}

TokenSeq DelimiterTokenizer::tokenize(std::string_view text,
                                      std::string doc_id) const {
  TokenSeq seq;
  seq.doc_id = std::move(doc_id);
  std::string pending_space;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (is_space(c)) {
      pending_space.push_back(c);
      ++i;
      continue;
    }
    std::size_t end = i + 1;
    if (!is_delimiter(c)) {
      while (end < text.size() && !is_space(text[end]) &&
             !is_delimiter(text[end])) {
        ++end;
      }
    }
    seq.tokens.emplace_back(text.substr(i, end - i));
    seq.spacing.push_back(std::move(pending_space));
    pending_space.clear();
    i = end;
  }
  seq.trailing = std::move(pending_space);
  return seq;
}

const Tokenizer& default_tokenizer() {
  static const DelimiterTokenizer tokenizer;
  return tokenizer;
}

}  // namespace htmlforge
