#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "generators.h"
#include "htmlforge/corpus/ingest.h"
#include "htmlforge/corpus/pipeline.h"
#include "htmlforge/dom/html.h"
#include "htmlforge/util/error.h"

namespace htmlforge::corpus {
namespace {

namespace fs = std::filesystem;

fs::path fixture(const std::string& rel) { return fs::path(HTMLFORGE_FIXTURE_DIR) / rel; }

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<CorpusRecord> drain(RecordSource& src) {
  std::vector<CorpusRecord> out;
  while (auto rec = src.next()) out.push_back(std::move(*rec));
  return out;
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("htmlforge_corpus_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
             "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

dom::Node prepare(const std::string& html) {
  return dom::annotate_refs(dom::clean(dom::parse(html), dom::CleaningConfig::defaults()));
}

// Brute force: collect every element path, resolve label targets by a
// full scan, and take the longest common path prefix.
std::vector<dom::Node> oracle_label_subtrees(const dom::Node& doc) {
  std::vector<std::pair<const dom::Node*, dom::NodePath>> all;
  visit_elements(doc, [&](const dom::Node& n, const dom::NodePath& p) {
    if (n.is_element()) all.emplace_back(&n, p);
    return true;
  });
  std::vector<dom::Node> out;
  for (const auto& [label, lpath] : all) {
    if (label->tag != "label" || label->attr("for") == nullptr) continue;
    const std::string& target = *label->attr("for");
    if (target.empty()) continue;  // an empty id never names an element
    std::vector<dom::NodePath> hits;
    for (const auto& [n, p] : all)
      if (n->attr("id") && *n->attr("id") == target) hits.push_back(p);
    if (hits.size() != 1) continue;
    dom::NodePath common;
    for (std::size_t i = 0; i < lpath.size() && i < hits[0].size() && lpath[i] == hits[0][i]; ++i)
      common.push_back(lpath[i]);
    out.push_back(*dom::node_at(doc, common));
  }
  return out;
}

bool holds_label_and_target(const dom::Node& subtree) {
  bool found = false;
  visit_elements(subtree, [&](const dom::Node& n, const dom::NodePath&) {
    if (n.is_element() && n.tag == "label" && n.attr("for")) {
      const std::string target = *n.attr("for");
      visit_elements(subtree, [&](const dom::Node& m, const dom::NodePath&) {
        if (m.is_element() && m.attr("id") && *m.attr("id") == target) found = true;
        return !found;
      });
    }
    return !found;
  });
  return found;
}

CorpusStats sort_oracle(std::vector<std::size_t> lengths) {
  CorpusStats s;
  if (lengths.empty()) return s;
  std::sort(lengths.begin(), lengths.end());
  std::size_t sum = 0;
  for (auto v : lengths) sum += v;
  const std::size_t n = lengths.size();
  const std::size_t rank = (9 * n + 9) / 10;  // ceil(0.9 n)
  s.example_count = n;
  s.token_mean = static_cast<double>(sum) / static_cast<double>(n);
  s.token_p90 = static_cast<double>(lengths[rank - 1]);
  s.token_max = lengths.back();
  return s;
}

TEST(Ingest, DirectoryOfThreeFiles) {
  TempDir dir;
  for (const char* name : {"a.html", "b.htm", "sub/c.html"}) {
    fs::create_directories((dir.path() / name).parent_path());
    std::ofstream(dir.path() / name) << "<p>x, y</p>";
  }
  std::ofstream(dir.path() / "notes.txt") << "ignored";
  DirectoryReader reader(dir.path());
  const auto recs = drain(reader);
  ASSERT_EQ(recs.size(), 3u);
  EXPECT_EQ(recs[0].doc_id, "a.html");
  EXPECT_EQ(recs[1].doc_id, "b.htm");
  EXPECT_EQ(recs[2].doc_id, "sub/c.html");
}

TEST(Ingest, EmptySources) {
  TempDir dir;
  DirectoryReader reader(dir.path());
  EXPECT_TRUE(drain(reader).empty());
  auto warc = WarcReader::from_bytes("");
  EXPECT_TRUE(drain(*warc).empty());
  EXPECT_EQ(warc->counters().warnings, 0u);
}

TEST(Ingest, MissingPathRaises) {
  EXPECT_THROW(open_source(fixture("corpus/does-not-exist.warc")), IngestError);
}

TEST(Ingest, MiniWarcYieldsHtmlResponsesOnly) {
  for (const char* name : {"corpus/mini.warc", "corpus/mini.warc.gz"}) {
    auto src = open_source(fixture(name));
    const auto recs = drain(*src);
    ASSERT_EQ(recs.size(), 2u) << name;
    EXPECT_EQ(recs[0].doc_id, "<urn:uuid:00000000-0000-0000-0000-000000000002>");
    EXPECT_EQ(recs[0].url, "http://example.test/homes");
    EXPECT_TRUE(recs[0].html.starts_with("<!DOCTYPE html>"));
    EXPECT_EQ(recs[1].html, "abc123 def456\n");
    EXPECT_EQ(src->counters().records_read, 6u);
    EXPECT_EQ(src->counters().skipped, 4u);
    EXPECT_EQ(src->counters().warnings, 0u);
  }
}

TEST(Ingest, GzipFromBytesMatchesPlain) {
  auto plain = WarcReader::from_bytes(read_file(fixture("corpus/mini.warc")));
  auto gz = WarcReader::from_bytes(read_file(fixture("corpus/mini.warc.gz")));
  const auto a = drain(*plain);
  const auto b = drain(*gz);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].doc_id, b[i].doc_id);
    EXPECT_EQ(a[i].html, b[i].html);
  }
}

TEST(Ingest, TruncatedWarcKeepsEarlierRecords) {
  auto src = open_source(fixture("corpus/mini_truncated.warc"));
  const auto recs = drain(*src);
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_EQ(src->counters().records_read, 5u);
  EXPECT_EQ(src->counters().warnings, 1u);
}

TEST(Filter, Examples) {
  EXPECT_EQ(filter_doc({"a", {}, "<p>\xff</p>"}).drop, DropReason::kNonUnicode);
  EXPECT_EQ(filter_doc({"b", {}, "abc123"}).drop, DropReason::kAlphanumericOnly);
  EXPECT_EQ(filter_doc({"c", {}, "<div><b>abc</b> 123</div>"}).drop, DropReason::kAlphanumericOnly);
  EXPECT_EQ(filter_doc({"d", {}, ""}).drop, DropReason::kAlphanumericOnly);
  EXPECT_TRUE(filter_doc({"e", {}, "<p>price: $5</p>"}).keep());
  EXPECT_TRUE(filter_doc({"f1", {}, read_file(fixture("dom/f1_real_estate.html"))}).keep());
  EXPECT_EQ(to_string(DropReason::kNonUnicode), "non-unicode");
  EXPECT_EQ(to_string(DropReason::kAlphanumericOnly), "alphanumeric-only");
}

TEST(Filter, DeterministicAndOrderIndependent) {
  Rng rng(11);
  std::vector<CorpusRecord> recs;
  for (int i = 0; i < 200; ++i) {
    std::string html = testing::random_html_soup(rng, 1 + rng.uniform_below(6));
    if (rng.uniform_below(10) == 0) html += "\xfe";
    recs.push_back({std::to_string(i), {}, html});
  }
  std::vector<std::optional<DropReason>> forward;
  for (const auto& r : recs) forward.push_back(filter_doc(r).drop);
  for (std::size_t i = recs.size(); i-- > 0;) EXPECT_EQ(filter_doc(recs[i]).drop, forward[i]);
}

TEST(LabelSubtrees, FormExample) {
  const dom::Node doc = prepare(R"(<form><label for="q">Q</label><input id="q"/></form>)");
  const auto subtrees = extract_label_subtrees(doc);
  ASSERT_EQ(subtrees.size(), 1u);
  EXPECT_EQ(subtrees[0], doc.children[0]);
  EXPECT_EQ(subtrees[0].tag, "form");
}

TEST(LabelSubtrees, NoLabels) {
  EXPECT_TRUE(extract_label_subtrees(prepare("<div><p>a</p></div>")).empty());
}

TEST(LabelSubtrees, AmbiguousOrMissingTargetsEmitNothing) {
  EXPECT_TRUE(extract_label_subtrees(
                  prepare(R"(<form><label for="d">D</label><input id="d"><input id="d"></form>)"))
                  .empty());
  EXPECT_TRUE(
      extract_label_subtrees(prepare(R"(<form><label for="x">X</label><input id="y"></form>)"))
          .empty());
}

TEST(LabelSubtrees, FixtureCorpusHasSevenMatchingOracle) {
  DirectoryReader reader(fixture("corpus/pages"));
  std::size_t pages = 0;
  std::size_t total = 0;
  while (auto rec = reader.next()) {
    ++pages;
    const dom::Node doc = prepare(rec->html);
    const auto ours = extract_label_subtrees(doc);
    EXPECT_EQ(ours, oracle_label_subtrees(doc)) << rec->doc_id;
    for (const auto& s : ours) EXPECT_TRUE(holds_label_and_target(s)) << rec->doc_id;
    total += ours.size();
  }
  EXPECT_EQ(pages, 20u);
  EXPECT_EQ(total, 7u);
}

TEST(LabelSubtrees, RandomTreesMatchOracle) {
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    Rng rng(seed);
    std::string html;
    const auto n = 1 + rng.uniform_below(6);
    for (std::uint64_t i = 0; i < n; ++i) {
      const std::string id = "t" + std::to_string(rng.uniform_below(3));
      html += "<div>";
      if (rng.uniform_below(2)) html += "<label for=\"" + id + "\">L</label>";
      html += testing::random_html_soup(rng, 4);
      html += "</div><section><input id=\"" + id + "\"></section>";
    }
    const dom::Node doc = prepare(html);
    const auto ours = extract_label_subtrees(doc);
    ASSERT_EQ(ours, oracle_label_subtrees(doc)) << "seed " << seed;
    for (const auto& s : ours) EXPECT_TRUE(holds_label_and_target(s));
  }
}

TEST(Stats, Examples) {
  const std::vector<std::size_t> a{10, 20, 30};
  const CorpusStats s = compute_stats_from_lengths(a);
  EXPECT_EQ(s.example_count, 3u);
  EXPECT_DOUBLE_EQ(s.token_mean, 20.0);
  EXPECT_DOUBLE_EQ(s.token_p90, 30.0);
  EXPECT_EQ(s.token_max, 30u);

  const std::vector<std::size_t> one{7};
  const CorpusStats t = compute_stats_from_lengths(one);
  EXPECT_DOUBLE_EQ(t.token_mean, 7.0);
  EXPECT_DOUBLE_EQ(t.token_p90, 7.0);
  EXPECT_EQ(t.token_max, 7u);

  EXPECT_EQ(compute_stats_from_lengths({}), CorpusStats{});
}

TEST(Stats, JsonFields) {
  const std::vector<std::size_t> a{1, 2};
  const auto j = compute_stats_from_lengths(a).to_json();
  for (const char* k : {"example_count", "token_mean", "token_p90", "token_max"})
    EXPECT_TRUE(j.contains(k)) << k;
}

TEST(Stats, MatchesSortOracleOnFixtureCorpus) {
  DirectoryReader reader(fixture("corpus/pages"));
  std::vector<TokenSeq> docs;
  std::vector<TokenSeq> subtrees;
  while (auto rec = reader.next()) {
    const dom::Node doc = prepare(rec->html);
    docs.push_back(default_tokenizer().tokenize(dom::serialize(doc), rec->doc_id));
    for (const auto& s : extract_label_subtrees(doc))
      subtrees.push_back(default_tokenizer().tokenize(dom::serialize(s), rec->doc_id));
  }
  for (const auto* set : {&docs, &subtrees}) {
    std::vector<std::size_t> lengths;
    for (const auto& d : *set) lengths.push_back(d.size());
    EXPECT_EQ(compute_stats(*set), sort_oracle(lengths));
  }
}

TEST(Stats, MatchesSortOracleOnRandomMultisets) {
  for (std::uint64_t seed = 1; seed <= 500; ++seed) {
    Rng rng(seed);
    std::vector<std::size_t> lengths(rng.uniform_below(300));
    for (auto& v : lengths) v = rng.uniform_below(rng.uniform_below(2) ? 20 : 9000);
    ASSERT_EQ(compute_stats_from_lengths(lengths), sort_oracle(lengths)) << "seed " << seed;
  }
}

TEST(Stats, MergeIsAssociativeAndCommutative) {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    Rng rng(seed);
    StatsAccumulator parts[3];
    StatsAccumulator whole;
    for (int i = 0; i < 120; ++i) {
      const auto v = rng.uniform_below(5000);
      parts[rng.uniform_below(3)].add(v);
      whole.add(v);
    }
    StatsAccumulator left = parts[0];
    left.merge(parts[1]);
    left.merge(parts[2]);
    StatsAccumulator bc = parts[1];
    bc.merge(parts[2]);
    StatsAccumulator right = parts[0];
    right.merge(bc);
    StatsAccumulator swapped = parts[2];
    swapped.merge(parts[0]);
    swapped.merge(parts[1]);
    EXPECT_EQ(left.finish(), whole.finish());
    EXPECT_EQ(right.finish(), whole.finish());
    EXPECT_EQ(swapped.finish(), whole.finish());
  }
}

}  // namespace
}  // namespace htmlforge::corpus
