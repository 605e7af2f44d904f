#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <utility>
#include <vector>

#include "json.hpp"

namespace htmlforge::layout {

struct LayoutConfig {
  std::size_t seq_len = 1;
  std::size_t local_radius = 127;
  std::size_t block_size = 16;

  /// Throws ConfigError when any field is zero.
  void validate() const;
};

enum class EdgeKind { kLocal, kGlobal };

/// For kLocal `to` is a token index; for kGlobal it is a block index.
struct Edge {
  std::size_t from = 0;
  std::size_t to = 0;
  EdgeKind kind = EdgeKind::kLocal;
  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Degree {
  std::size_t local = 0;
  std::size_t global = 0;
  friend bool operator==(const Degree&, const Degree&) = default;
};

/// Encoder connectivity: a symmetric local window of radius r around each
/// token, plus an edge from every token to every block summary (one block
/// per k consecutive tokens). Stored as one window per token and one block
/// index per token, so memory is O(L).
class AttentionLayout {
 public:
  static AttentionLayout build(const LayoutConfig& cfg);

  const LayoutConfig& config() const noexcept { return cfg_; }
  std::size_t seq_len() const noexcept { return cfg_.seq_len; }
  std::size_t global_blocks() const noexcept { return blocks_; }

  std::size_t block_of(std::size_t token) const { return block_of_.at(token); }
  /// Tokens [first, last) summarised by block `b`.
  std::pair<std::size_t, std::size_t> block_range(std::size_t b) const;
  /// Inclusive bounds of the local window of `token`.
  std::pair<std::size_t, std::size_t> local_window(std::size_t token) const {
    return windows_.at(token);
  }
  bool attends_local(std::size_t from, std::size_t to) const;

  /// Throws std::out_of_range when token >= L.
  Degree degree(std::size_t token) const;

  /// L + 2mL - m(m+1) local edges with m = min(r, L-1), plus L * ceil(L/k)
  /// global edges.
  std::size_t nnz() const;

  /// Every edge: for each token, its local edges in ascending order, then
  /// its global edges in ascending block order.
  void for_each_edge(const std::function<void(const Edge&)>& fn) const;

  /// Coordinate list, one "i j kind" line per edge. Block summaries are
  /// numbered L, L+1, ... after the last token. With `block_to_block`,
  /// every summary also links to every summary (kind G).
  void write_coo(std::ostream& out, bool block_to_block = false) const;

  /// {"L","r","k","global_blocks","nnz"}; nnz counts block-to-block edges
  /// when they are exported.
  nlohmann::json summary(bool block_to_block = false) const;

 private:
  LayoutConfig cfg_;
  std::size_t blocks_ = 0;
  std::vector<std::pair<std::size_t, std::size_t>> windows_;
  std::vector<std::size_t> block_of_;
};

}  // namespace htmlforge::layout
