#include "htmlforge/layout/attention_layout.h"

#include <algorithm>
#include <ostream>
#include <stdexcept>
#include <string>

#include "htmlforge/util/error.h"

namespace htmlforge::layout {

void LayoutConfig::validate() const {
  if (seq_len == 0) throw ConfigError("L", "must be >= 1");
  if (local_radius == 0) throw ConfigError("r", "must be >= 1");
  if (block_size == 0) throw ConfigError("k", "must be >= 1");
}

AttentionLayout AttentionLayout::build(const LayoutConfig& cfg) {
  cfg.validate();
  AttentionLayout layout;
  layout.cfg_ = cfg;
  const std::size_t n = cfg.seq_len;
  const std::size_t r = cfg.local_radius;
  layout.blocks_ = (n + cfg.block_size - 1) / cfg.block_size;
  layout.windows_.reserve(n);
  layout.block_of_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    layout.windows_.emplace_back(i >= r ? i - r : 0, std::min(n - 1, i + r));
    layout.block_of_.push_back(i / cfg.block_size);
  }
  return layout;
}

std::pair<std::size_t, std::size_t> AttentionLayout::block_range(std::size_t b) const {
  if (b >= blocks_) throw std::out_of_range("block index " + std::to_string(b));
  const std::size_t first = b * cfg_.block_size;
  return {first, std::min(cfg_.seq_len, first + cfg_.block_size)};
}

bool AttentionLayout::attends_local(std::size_t from, std::size_t to) const {
  if (from >= seq_len() || to >= seq_len()) return false;
  const auto [lo, hi] = windows_[from];
  return to >= lo && to <= hi;
}

Degree AttentionLayout::degree(std::size_t token) const {
  if (token >= seq_len()) {
    throw std::out_of_range("token " + std::to_string(token) + " outside [0, " +
                            std::to_string(seq_len()) + ")");
  }
  const auto [lo, hi] = windows_[token];
  return {hi - lo + 1, blocks_};
}

std::size_t AttentionLayout::nnz() const {
  const std::size_t n = seq_len();
  const std::size_t m = std::min(cfg_.local_radius, n - 1);
  return n + 2 * m * n - m * (m + 1) + n * blocks_;
}

void AttentionLayout::for_each_edge(const std::function<void(const Edge&)>& fn) const {
  for (std::size_t i = 0; i < seq_len(); ++i) {
    const auto [lo, hi] = windows_[i];
    for (std::size_t j = lo; j <= hi; ++j) fn({i, j, EdgeKind::kLocal});
    for (std::size_t b = 0; b < blocks_; ++b) fn({i, b, EdgeKind::kGlobal});
  }
}

void AttentionLayout::write_coo(std::ostream& out, bool block_to_block) const {
  const std::size_t n = seq_len();
  std::string line;
  for_each_edge([&](const Edge& e) {
    line.clear();
    line += std::to_string(e.from);
    line.push_back(' ');
    line += std::to_string(e.kind == EdgeKind::kLocal ? e.to : n + e.to);
    line += e.kind == EdgeKind::kLocal ? " L\n" : " G\n";
    out << line;
  });
  if (!block_to_block) return;
  for (std::size_t a = 0; a < blocks_; ++a) {
    for (std::size_t b = 0; b < blocks_; ++b) {
      out << n + a << ' ' << n + b << " G\n";
    }
  }
}

nlohmann::json AttentionLayout::summary(bool block_to_block) const {
  const std::size_t extra = block_to_block ? blocks_ * blocks_ : 0;
  return nlohmann::json{{"L", cfg_.seq_len},
                        {"r", cfg_.local_radius},
                        {"k", cfg_.block_size},
                        {"global_blocks", blocks_},
                        {"nnz", nnz() + extra}};
}

}  // namespace htmlforge::layout
