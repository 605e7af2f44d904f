#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "htmlforge/denoise/denoise.h"

namespace htmlforge::denoise {

std::string sentinel(std::size_t index) {
  return "<extra_id_" + std::to_string(index) + ">";
}

bool looks_like_sentinel(std::string_view token) {
  std::size_t i = 0;
  while (i < token.size() && token[i] == '\\') ++i;
  token.remove_prefix(i);
  constexpr std::string_view kHead = "<extra_id_";
  if (!token.starts_with(kHead) || !token.ends_with('>')) return false;
  const std::string_view digits = token.substr(kHead.size(), token.size() - kHead.size() - 1);
  return !digits.empty() &&
         std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::string Objective::tag() const {
  if (kind == Kind::kPrefix) return "prefix";
  std::ostringstream out;
  if (mean == std::floor(mean)) {
    out << "span" << static_cast<long long>(mean);
  } else {
    out << "span" << mean;
  }
  return out.str();
}

nlohmann::json DenoisingExample::to_json() const {
  return nlohmann::json{{"doc_id", doc_id},
                        {"objective", objective.tag()},
                        {"input", input},
                        {"target", target},
                        {"truncated_input", truncated_input},
                        {"truncated_target", truncated_target}};
}

namespace {

std::string escape_literal(const std::string& token, std::size_t& escaped) {
  if (!looks_like_sentinel(token)) return token;
  ++escaped;
  return "\\" + token;
}

// Builds the model view of a span-corruption example. Keeps the longest
// run of leading spans whose sentinels fit the input window, whose
// target fits the output window, and whose sentinel indices (including
// the closing one) stay inside the vocabulary.
void build_span_view(DenoisingExample& ex, const std::vector<std::size_t>& sentinel_pos,
                     const ViewLimits& limits) {
  const std::size_t n = ex.mask.spans.size();
  const std::size_t input_cap = std::min(limits.input_len, ex.full_input.size());
  std::size_t kept = 0;
  while (kept < n && sentinel_pos[kept] < input_cap) ++kept;
  kept = std::min(kept, kSentinelCount - 1);
  auto target_len = [&](std::size_t m) {
    if (m == 0) return std::size_t{0};
    std::size_t len = 1;
    for (std::size_t i = 0; i < m; ++i) len += 1 + ex.mask.spans[i].length;
    return len;
  };
  while (kept > 0 && target_len(kept) > limits.output_len) --kept;

  std::size_t input_end = input_cap;
  if (kept < n) input_end = std::min(input_end, sentinel_pos[kept]);
  ex.input.assign(ex.full_input.begin(), ex.full_input.begin() + static_cast<long>(input_end));
  ex.target.assign(ex.full_target.begin(),
                   ex.full_target.begin() + static_cast<long>(target_len(kept)));
  if (kept > 0 && kept < n) ex.target.back() = sentinel(kept);
  ex.truncated_input = ex.input.size() < ex.full_input.size();
  ex.truncated_target = ex.target != ex.full_target;
}

}  // namespace

DenoisingExample apply_mask(const TokenSeq& seq, const SpanMask& mask,
                            const ViewLimits& limits) {
  if (!mask.valid_for(seq.size())) {
    throw std::invalid_argument("apply_mask: mask does not fit the sequence");
  }
  DenoisingExample ex;
  ex.doc_id = seq.doc_id;
  ex.mask = mask;

  std::vector<std::size_t> sentinel_pos;
  std::size_t next = 0;
  for (std::size_t i = 0; i < mask.spans.size(); ++i) {
    const Span& span = mask.spans[i];
    for (; next < span.start; ++next) {
      ex.full_input.push_back(escape_literal(seq.tokens[next], ex.escaped_literals));
    }
    sentinel_pos.push_back(ex.full_input.size());
    ex.full_input.push_back(sentinel(i));
    ex.full_target.push_back(sentinel(i));
    for (std::size_t k = 0; k < span.length; ++k) {
      ex.full_target.push_back(escape_literal(seq.tokens[span.start + k], ex.escaped_literals));
    }
    next = span.start + span.length;
  }
  for (; next < seq.size(); ++next) {
    ex.full_input.push_back(escape_literal(seq.tokens[next], ex.escaped_literals));
  }
  if (!mask.spans.empty()) ex.full_target.push_back(sentinel(mask.spans.size()));

  build_span_view(ex, sentinel_pos, limits);
  return ex;
}

DenoisingExample make_prefix_example_at(const TokenSeq& seq, std::size_t split,
                                        const ViewLimits& limits) {
  if (split < 1 || split >= seq.size()) {
    throw std::invalid_argument("make_prefix_example_at: split out of range");
  }
  DenoisingExample ex;
  ex.doc_id = seq.doc_id;
  ex.objective = Objective::prefix();
  ex.split = split;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    auto& side = i < split ? ex.full_input : ex.full_target;
    side.push_back(escape_literal(seq.tokens[i], ex.escaped_literals));
  }
  const std::size_t keep_in = std::min(limits.input_len, ex.full_input.size());
  ex.input.assign(ex.full_input.end() - static_cast<long>(keep_in), ex.full_input.end());
  const std::size_t keep_out = std::min(limits.output_len, ex.full_target.size());
  ex.target.assign(ex.full_target.begin(), ex.full_target.begin() + static_cast<long>(keep_out));
  ex.truncated_input = keep_in < ex.full_input.size();
  ex.truncated_target = keep_out < ex.full_target.size();
  return ex;
}

std::optional<DenoisingExample> make_prefix_example(const TokenSeq& seq, Rng& rng,
                                                    const ViewLimits& limits) {
  if (seq.size() < 2) return std::nullopt;
  const auto split = static_cast<std::size_t>(
      rng.uniform_int(1, static_cast<std::int64_t>(seq.size()) - 1));
  return make_prefix_example_at(seq, split, limits);
}

}  // namespace htmlforge::denoise
