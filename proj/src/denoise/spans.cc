#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "htmlforge/denoise/denoise.h"

namespace htmlforge::denoise {

std::size_t SpanMask::masked_tokens() const {
  std::size_t total = 0;
  for (const auto& s : spans) total += s.length;
  return total;
}

bool SpanMask::valid_for(std::size_t length) const {
  std::size_t min_start = 0;
  for (const auto& s : spans) {
    if (s.length == 0 || s.start < min_start) return false;
    if (s.start + s.length > length) return false;
    min_start = s.start + s.length + 1;
  }
  return true;
}

std::size_t draw_span_length(double mean, double sd, Rng& rng) {
  const long long drawn = std::llround(rng.normal(mean, sd));
  return drawn < 1 ? 1 : static_cast<std::size_t>(drawn);
}

namespace {

// n distinct values from [0, range), ascending (Floyd's algorithm).
std::vector<std::size_t> sample_sorted(std::size_t n, std::size_t range, Rng& rng) {
  std::set<std::size_t> chosen;
  for (std::size_t j = range - n; j < range; ++j) {
    const std::size_t t = rng.uniform_below(j + 1);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  return {chosen.begin(), chosen.end()};
}

}  // namespace

SpanMask sample_spans(std::size_t length, double mean, double rate, Rng& rng,
                      const SpanOptions& options) {
  if (length == 0) throw std::invalid_argument("sample_spans: length must be >= 1");
  if (!(rate >= 0.0 && rate < 1.0)) {
    throw std::invalid_argument("sample_spans: rate must be in [0, 1)");
  }
  if (!(mean > 0.0)) throw std::invalid_argument("sample_spans: mean must be > 0");
  const auto budget =
      static_cast<std::size_t>(std::llround(rate * static_cast<double>(length)));
  if (budget == 0) return {};
  const double sd = mean * options.sd_ratio;

  for (int attempt = 0; attempt < options.max_attempts; ++attempt) {
    std::vector<std::size_t> lengths;
    std::size_t total = 0;
    while (total < budget) {
      std::size_t len = draw_span_length(mean, sd, rng);
      if (options.policy == BudgetPolicy::kExact) len = std::min(len, budget - total);
      lengths.push_back(len);
      total += len;
    }
    const std::size_t n = lengths.size();
    if (total + (n - 1) > length) continue;

    for (std::size_t i = n; i > 1; --i) {
      std::swap(lengths[i - 1], lengths[rng.uniform_below(i)]);
    }
    // Slack beyond the mandatory one-token gaps, spread over n + 1 gaps.
    const std::size_t slack = length - total - (n - 1);
    const std::vector<std::size_t> bars = sample_sorted(n, slack + n, rng);

    SpanMask mask;
    mask.spans.reserve(n);
    std::size_t pos = 0;
    std::size_t prev_bar = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t gap = i == 0 ? bars[0] : bars[i] - prev_bar - 1;
      prev_bar = bars[i];
      pos += gap + (i == 0 ? 0 : 1);
      mask.spans.push_back({pos, lengths[i]});
      pos += lengths[i];
    }
    return mask;
  }
  throw SpanPlacementError("cannot place " + std::to_string(budget) +
                           " masked tokens in a sequence of " +
                           std::to_string(length) + " after " +
                           std::to_string(options.max_attempts) + " attempts");
}

}  // namespace htmlforge::denoise
