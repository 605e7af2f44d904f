#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <variant>
#include <string>
#include <vector>

#include "htmlforge/dom/tokenizer.h"
#include "htmlforge/util/error.h"
#include "htmlforge/util/rng.h"
#include "json.hpp"

namespace htmlforge::denoise {

struct Span {
  std::size_t start = 0;
  std::size_t length = 0;
  friend bool operator==(const Span&, const Span&) = default;
};

/// Masked spans of one sequence: sorted, disjoint, never adjacent.
struct SpanMask {
  std::vector<Span> spans;

  std::size_t masked_tokens() const;
  /// True when the spans are sorted, in [0, length), non-empty, and
  /// separated by at least one unmasked token.
  bool valid_for(std::size_t length) const;
  friend bool operator==(const SpanMask&, const SpanMask&) = default;
};

enum class BudgetPolicy {
  kExact,     // lengths sum to round(rate * L); the last span is clipped
  kExpected,  // the last span keeps its drawn length
};

struct SpanOptions {
  double sd_ratio = 0.5;  // stddev = sd_ratio * mean
  BudgetPolicy policy = BudgetPolicy::kExact;
  int max_attempts = 64;
};

class SpanPlacementError : public Error {
 public:
  using Error::Error;
};

/// max(1, round(N(mean, sd)))
std::size_t draw_span_length(double mean, double sd, Rng& rng);

/// Draws span lengths until the budget round(rate * length) is met, then
/// places them uniformly among all disjoint, non-adjacent layouts.
/// Throws SpanPlacementError when no layout fits after max_attempts
/// redraws, and std::invalid_argument on length == 0 or rate outside
/// [0, 1).
SpanMask sample_spans(std::size_t length, double mean, double rate, Rng& rng,
                      const SpanOptions& options = {});

/// Sentinels are "<extra_id_0>" .. "<extra_id_99>".
inline constexpr std::size_t kSentinelCount = 100;
std::string sentinel(std::size_t index);

/// True for a literal sentinel, optionally preceded by backslashes. Such
/// tokens in a document get one extra leading backslash before masking.
bool looks_like_sentinel(std::string_view token);

struct Objective {
  enum class Kind { kSpan, kPrefix };
  Kind kind = Kind::kSpan;
  double mean = 0.0;

  static Objective span(double mean) { return {Kind::kSpan, mean}; }
  static Objective prefix() { return {Kind::kPrefix, 0.0}; }
  /// "span8", "span64", "prefix", ...
  std::string tag() const;
  friend bool operator==(const Objective&, const Objective&) = default;
};

struct ViewLimits {
  std::size_t input_len = 4096;
  std::size_t output_len = 910;
};

/// One training example.
///
/// `full_input`/`full_target` are the untruncated sequences; splicing the
/// target spans back into the input at the sentinels (and dropping one
/// escape backslash from escaped literals) yields the source tokens.
/// `input`/`target` are what the model sees: at most input_len/output_len
/// tokens and at most kSentinelCount sentinels, recomputed so that the
/// same splice rebuilds a prefix of the source.
struct DenoisingExample {
  std::string doc_id;
  Objective objective;
  SpanMask mask;
  std::size_t split = 0;  // prefix objective only
  std::vector<std::string> full_input;
  std::vector<std::string> full_target;
  std::vector<std::string> input;
  std::vector<std::string> target;
  bool truncated_input = false;
  bool truncated_target = false;
  std::size_t escaped_literals = 0;

  /// {"doc_id","objective","input","target","truncated_input","truncated_target"}
  nlohmann::json to_json() const;
};

/// Requires mask.valid_for(seq.size()).
DenoisingExample apply_mask(const TokenSeq& seq, const SpanMask& mask,
                            const ViewLimits& limits = {});

/// Prefix-LM example split at `split` (1 <= split < |seq|). When the prefix
/// is longer than input_len its tail is kept; the target keeps its head.
DenoisingExample make_prefix_example_at(const TokenSeq& seq, std::size_t split,
                                        const ViewLimits& limits = {});

/// Split drawn uniformly from [1, |seq| - 1]; nullopt when |seq| < 2.
std::optional<DenoisingExample> make_prefix_example(const TokenSeq& seq, Rng& rng,
                                                    const ViewLimits& limits = {});

struct DenoiseConfig {
  std::vector<double> span_means{8.0, 64.0};
  double corruption_rate = 0.15;
  std::size_t input_len = 4096;
  std::size_t output_len = 910;
  std::uint64_t seed = 0;
  bool prefix_lm = false;
  double span_sd_ratio = 0.5;
  BudgetPolicy budget_policy = BudgetPolicy::kExact;

  /// Throws ConfigError naming the first bad field.
  void validate() const;
  /// Mixture components in order: one per span mean, then prefix.
  std::vector<Objective> components() const;

  /// Overlays recognised keys of `j` on the defaults; unknown keys and
  /// wrong types raise ConfigError.
  static DenoiseConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct SkippedDoc {
  std::string doc_id;
  std::string reason;
};

struct MixtureOutput {
  std::vector<DenoisingExample> examples;  // input order, skips removed
  std::vector<SkippedDoc> skipped;
  std::map<std::string, std::size_t> component_counts;
};

/// Generates the example for one document. The generator is seeded from
/// (cfg.seed, doc_id), so results do not depend on scheduling. Returns
/// the skip reason instead when the document cannot yield an example.
std::variant<DenoisingExample, SkippedDoc> emit_one(const TokenSeq& doc,
                                                    const DenoiseConfig& cfg);

/// Each document draws one mixture component with equal weights.
MixtureOutput emit_mixture(std::span<const TokenSeq> corpus,
                           const DenoiseConfig& cfg, unsigned jobs = 1);

}  // namespace htmlforge::denoise
