#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "htmlforge/corpus/ingest.h"
#include "htmlforge/dom/node.h"
#include "htmlforge/dom/tokenizer.h"
#include "json.hpp"

namespace htmlforge::corpus {

enum class DropReason { kNonUnicode, kAlphanumericOnly };

std::string_view to_string(DropReason reason);

struct FilterDecision {
  std::optional<DropReason> drop;  // empty means keep
  bool keep() const noexcept { return !drop.has_value(); }
};

/// Drops records that are not valid UTF-8, and records whose text after
/// tag stripping is nothing but ASCII letters, digits and whitespace
/// (an empty text counts as such).
FilterDecision filter_doc(const CorpusRecord& rec);

/// For every <label for=X> (document order) whose X names exactly one
/// element id in the document, the smallest subtree that holds both the
/// label and that element. Labels with no or ambiguous targets yield
/// nothing. When the common ancestor is the document root, the whole
/// document is returned.
std::vector<dom::Node> extract_label_subtrees(const dom::Node& doc);

struct CorpusStats {
  std::size_t example_count = 0;
  double token_mean = 0.0;
  double token_p90 = 0.0;
  std::size_t token_max = 0;

  nlohmann::json to_json() const;
  friend bool operator==(const CorpusStats&, const CorpusStats&) = default;
};

/// Exact mergeable accumulator: count, sum, max and the full length
/// histogram, so p90 is the true nearest-rank value. merge() is
/// associative and commutative.
class StatsAccumulator {
 public:
  void add(std::size_t token_count);
  void merge(const StatsAccumulator& other);
  CorpusStats finish() const;

 private:
  std::size_t count_ = 0;
  std::size_t sum_ = 0;
  std::size_t max_ = 0;
  std::map<std::size_t, std::size_t> histogram_;
};

CorpusStats compute_stats(std::span<const TokenSeq> corpus);
CorpusStats compute_stats_from_lengths(std::span<const std::size_t> lengths);

}  // namespace htmlforge::corpus
