#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace htmlforge {

/// Tokenized view of one document.
///
/// `spacing[i]` is the whitespace that preceded `tokens[i]` in the source
/// and `trailing` is whatever whitespace followed the last token, so the
/// source text can be rebuilt exactly. Consumers that only count or mask
/// tokens can ignore both.
struct TokenSeq {
  std::string doc_id;
  std::vector<std::string> tokens;
  std::vector<std::string> spacing;
  std::string trailing;

  std::size_t size() const noexcept { return tokens.size(); }
  bool empty() const noexcept { return tokens.empty(); }

  /// {"doc_id": ..., "tokens": [...]}
  nlohmann::json to_json() const;

  friend bool operator==(const TokenSeq&, const TokenSeq&) = default;
};

/// Tokenizer port. Budgets and rates elsewhere are stated per token of
/// whatever implementation is injected here.
class Tokenizer {
 public:
  virtual ~Tokenizer() = default;
  virtual TokenSeq tokenize(std::string_view text,
                            std::string doc_id = {}) const = 0;
  virtual std::string detokenize(const TokenSeq& seq) const;

  std::size_t count(std::string_view text) const {
    return tokenize(text).size();
  }
};

/// Splits on ASCII whitespace and emits each of < > = " / as its own token.
class DelimiterTokenizer final : public Tokenizer {
 public:
  TokenSeq tokenize(std::string_view text,
                    std::string doc_id = {}) const override;
};

const Tokenizer& default_tokenizer();

}  // namespace htmlforge
