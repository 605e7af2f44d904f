#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>
#include <string>

#include "htmlforge/layout/attention_layout.h"
#include "htmlforge/util/error.h"
#include "htmlforge/util/rng.h"
#include "oracles.h"

namespace htmlforge::layout {
namespace {

AttentionLayout make(std::size_t L, std::size_t r, std::size_t k) {
  return AttentionLayout::build({L, r, k});
}

std::vector<oracle::LayoutEdge> edges_of(const AttentionLayout& lay) {
  std::vector<oracle::LayoutEdge> out;
  lay.for_each_edge([&](const Edge& e) {
    out.push_back({e.from, e.to, e.kind == EdgeKind::kGlobal});
  });
  return out;
}

TEST(Layout, SingleToken) {
  const auto lay = make(1, 127, 16);
  EXPECT_EQ(lay.global_blocks(), 1u);
  EXPECT_TRUE(lay.attends_local(0, 0));
  EXPECT_EQ(lay.degree(0), (Degree{1, 1}));
  EXPECT_EQ(edges_of(lay), oracle::brute_force_layout(1, 127, 16));
}

TEST(Layout, InteriorDegreeSmall) {
  const auto lay = make(16, 2, 4);
  EXPECT_EQ(lay.degree(8), (Degree{5, 4}));
}

TEST(Layout, DefaultGeometryHas256Blocks) {
  const auto lay = make(4096, 127, 16);
  EXPECT_EQ(lay.global_blocks(), 256u);
  const LayoutConfig defaults;
  EXPECT_EQ(defaults.local_radius, 127u);
  EXPECT_EQ(defaults.block_size, 16u);
}

TEST(Layout, DegreeBoundaryAndInterior) {
  const auto lay = make(100, 3, 7);
  EXPECT_EQ(lay.degree(0).local, 4u);
  EXPECT_EQ(lay.degree(50).local, 7u);
  EXPECT_EQ(lay.degree(99).local, 4u);
  EXPECT_EQ(lay.degree(50).global, 15u);
  EXPECT_THROW(lay.degree(100), std::out_of_range);
}

TEST(Layout, DegreeMatchesBruteForceOnRandomTriples) {
  Rng rng(77);
  for (int t = 0; t < 2000; ++t) {
    const std::size_t L = 1 + rng.uniform_below(512);
    const std::size_t r = 1 + rng.uniform_below(600);
    const std::size_t k = 1 + rng.uniform_below(600);
    const std::size_t i = rng.uniform_below(L);
    const auto lay = make(L, r, k);
    std::size_t local = 0;
    for (std::size_t j = 0; j < L; ++j) local += (i > j ? i - j : j - i) <= r;
    std::size_t blocks = 0;
    for (std::size_t s = 0; s < L; s += k) ++blocks;
    ASSERT_EQ(lay.degree(i), (Degree{local, blocks})) << L << " " << r << " " << k << " " << i;
  }
}

TEST(Layout, NnzExamples) {
  EXPECT_EQ(make(1, 1, 1).nnz(), 2u);
  // Brute force over L=16, r=2, k=4: 74 local edges plus 16 * 4 global.
  const auto brute = oracle::brute_force_layout(16, 2, 4);
  std::size_t local = 0;
  for (const auto& e : brute) local += !e.global;
  EXPECT_EQ(local, 74u);
  EXPECT_EQ(make(16, 2, 4).nnz(), 138u);
  EXPECT_EQ(make(16, 2, 4).nnz(), brute.size());
}

TEST(Layout, EqualsBruteForceEdgeForEdge) {
  Rng rng(5);
  for (std::size_t L = 1; L <= 160; ++L) {
    const std::size_t r = 1 + rng.uniform_below(L + 3);
    const std::size_t k = 1 + rng.uniform_below(L + 3);
    const auto lay = make(L, r, k);
    const auto brute = oracle::brute_force_layout(L, r, k);
    ASSERT_EQ(edges_of(lay), brute) << L << " " << r << " " << k;
    ASSERT_EQ(lay.nnz(), brute.size());
  }
}

TEST(Layout, SymmetryAndBlockPartition) {
  const auto lay = make(300, 17, 11);
  for (std::size_t i = 0; i < 300; i += 7)
    for (std::size_t j = 0; j < 300; j += 5)
      EXPECT_EQ(lay.attends_local(i, j), lay.attends_local(j, i));
  std::size_t covered = 0;
  for (std::size_t b = 0; b < lay.global_blocks(); ++b) {
    const auto [first, last] = lay.block_range(b);
    EXPECT_EQ(first, covered);
    for (std::size_t t = first; t < last; ++t) EXPECT_EQ(lay.block_of(t), b);
    covered = last;
  }
  EXPECT_EQ(covered, 300u);
}

TEST(Layout, NnzGrowthUnderDoubling) {
  // nnz = Theta(L (r + L / k)): each doubling multiplies it by 2 to 4,
  // near 2 while r dominates L / k and near 4 once L / k dominates.
  std::vector<double> ratios;
  std::size_t prev = make(256, 127, 16).nnz();
  for (std::size_t L = 512; L <= 65536; L *= 2) {
    const std::size_t cur = make(L, 127, 16).nnz();
    ratios.push_back(static_cast<double>(cur) / static_cast<double>(prev));
    prev = cur;
  }
  for (double q : ratios) {
    EXPECT_GE(q, 2.0);
    EXPECT_LE(q, 4.0);
  }
  EXPECT_LT(ratios.front(), 2.6);
  EXPECT_GT(ratios.back(), 3.5);
}

TEST(Layout, CooExportAndSummary) {
  const auto lay = make(5, 1, 2);
  std::ostringstream out;
  lay.write_coo(out);
  std::istringstream in(out.str());
  std::string line;
  std::size_t lines = 0;
  std::size_t globals = 0;
  while (std::getline(in, line)) {
    ++lines;
    std::istringstream fields(line);
    std::size_t i = 0;
    std::size_t j = 0;
    std::string kind;
    fields >> i >> j >> kind;
    if (kind == "G") {
      ++globals;
      EXPECT_GE(j, 5u);
      EXPECT_LT(j, 8u);
    } else {
      EXPECT_EQ(kind, "L");
      EXPECT_LT(j, 5u);
    }
  }
  EXPECT_EQ(lines, lay.nnz());
  EXPECT_EQ(globals, 15u);
  const auto s = lay.summary();
  EXPECT_EQ(s["L"], 5);
  EXPECT_EQ(s["r"], 1);
  EXPECT_EQ(s["k"], 2);
  EXPECT_EQ(s["global_blocks"], 3);
  EXPECT_EQ(s["nnz"], lay.nnz());
  EXPECT_EQ(lay.summary(true)["nnz"], lay.nnz() + 9);
  std::ostringstream with_blocks;
  lay.write_coo(with_blocks, true);
  const std::string coo = with_blocks.str();
  EXPECT_EQ(static_cast<std::size_t>(std::count(coo.begin(), coo.end(), '\n')), lay.nnz() + 9);
}

TEST(Layout, ConfigErrorsNameTheField) {
  for (auto [cfg, field] : std::vector<std::pair<LayoutConfig, std::string>>{
           {{0, 1, 1}, "L"}, {{1, 0, 1}, "r"}, {{1, 1, 0}, "k"}}) {
    try {
      cfg.validate();
      ADD_FAILURE() << field;
    } catch (const ConfigError& e) {
      EXPECT_EQ(e.field(), field);
    }
  }
}

}  // namespace
}  // namespace htmlforge::layout
