#include <algorithm>

#include "htmlforge/corpus/pipeline.h"

namespace htmlforge::corpus {

nlohmann::json CorpusStats::to_json() const {
  return nlohmann::json{{"example_count", example_count},
                        {"token_mean", token_mean},
                        {"token_p90", token_p90},
                        {"token_max", token_max}};
}

void StatsAccumulator::add(std::size_t token_count) {
  ++count_;
  sum_ += token_count;
  max_ = std::max(max_, token_count);
  ++histogram_[token_count];
}

void StatsAccumulator::merge(const StatsAccumulator& other) {
  count_ += other.count_;
  sum_ += other.sum_;
  max_ = std::max(max_, other.max_);
  for (const auto& [len, n] : other.histogram_) histogram_[len] += n;
}

CorpusStats StatsAccumulator::finish() const {
  CorpusStats stats;
  stats.example_count = count_;
  if (count_ == 0) return stats;
  stats.token_mean = static_cast<double>(sum_) / static_cast<double>(count_);
  stats.token_max = max_;
  // Nearest rank: the ceil(0.9 n)-th smallest value.
  const std::size_t rank = (9 * count_ + 9) / 10;
  std::size_t seen = 0;
  for (const auto& [len, n] : histogram_) {
    seen += n;
    if (seen >= rank) {
      stats.token_p90 = static_cast<double>(len);
      break;
    }
  }
  return stats;
}

CorpusStats compute_stats(std::span<const TokenSeq> corpus) {
  StatsAccumulator acc;
  for (const auto& seq : corpus) acc.add(seq.size());
  return acc.finish();
}

CorpusStats compute_stats_from_lengths(std::span<const std::size_t> lengths) {
  StatsAccumulator acc;
  for (std::size_t len : lengths) acc.add(len);
  return acc.finish();
}

}  // namespace htmlforge::corpus
