#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "htmlforge/agent/task.h"
#include "htmlforge/cli/cli.h"
#include "htmlforge/cli/manifest.h"
#include "htmlforge/corpus/ingest.h"
#include "htmlforge/corpus/pipeline.h"
#include "htmlforge/denoise/denoise.h"
#include "htmlforge/dom/html.h"
#include "htmlforge/layout/attention_layout.h"
#include "htmlforge/snippet/snippet.h"
#include "htmlforge/util/error.h"
#include "htmlforge/util/jsonl.h"
#include "htmlforge/util/parallel.h"

namespace htmlforge::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

/// Failure with a stable exit code and machine-readable error name.
struct CliFailure : std::runtime_error {
  CliFailure(int code, std::string error, const std::string& message)
      : std::runtime_error(message), code(code), error(std::move(error)) {}
  int code;
  std::string error;
};

struct Common {
  std::vector<std::string> inputs;
  std::string output;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  std::string config;
};

std::shared_ptr<spdlog::logger> logger() {
  static std::shared_ptr<spdlog::logger> log = [] {
    auto l = std::make_shared<spdlog::logger>("htmlforge",
                                              std::make_shared<spdlog::sinks::stderr_sink_mt>());
    l->set_pattern("[%l] %v");
    const char* env = std::getenv("HTMLFORGE_LOG");
    l->set_level(env ? spdlog::level::from_str(env) : spdlog::level::warn);
    return l;
  }();
  return log;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw CliFailure(kExitUsage, "input-not-found", "cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void require_inputs(const Common& c, std::size_t min, std::size_t max) {
  if (c.inputs.size() < min || c.inputs.size() > max) {
    throw CliFailure(kExitUsage, "usage-error",
                     "expected " + std::to_string(min) + (max > min ? "+" : "") + " --input");
  }
  for (const auto& in : c.inputs) {
    if (!fs::exists(in)) throw CliFailure(kExitUsage, "input-not-found", "input-not-found: " + in);
  }
}

/// --config accepts inline JSON (starting with '{') or a file path.
json load_config(const std::string& arg) {
  if (arg.empty()) return json::object();
  std::string text = arg;
  if (arg.front() != '{') {
    if (!fs::exists(arg)) throw CliFailure(kExitUsage, "input-not-found", "input-not-found: " + arg);
    text = read_file(arg);
  }
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError("config", e.what());
  }
  if (!j.is_object()) throw ConfigError("config", "expected a JSON object");
  return j;
}

void reject_unknown(const json& cfg, std::initializer_list<const char*> known) {
  for (const auto& [key, _] : cfg.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw ConfigError(key, "unknown key");
  }
}

template <typename T>
T config_value(const json& cfg, const char* key, T fallback) {
  if (!cfg.contains(key)) return fallback;
  try {
    return cfg.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(key, "wrong type");
  }
}

fs::path prepare_output(const Common& c) {
  if (c.output.empty()) throw CliFailure(kExitUsage, "usage-error", "--output is required");
  std::error_code ec;
  fs::create_directories(c.output, ec);
  if (ec || !fs::is_directory(c.output)) {
    throw CliFailure(kExitUsage, "output-not-writable", "cannot create " + c.output);
  }
  return c.output;
}

/// Accumulates output files and writes the manifest last.
class Run {
 public:
  Run(std::string command, const Common& c, fs::path dir) : dir_(std::move(dir)) {
    m_.command = std::move(command);
    m_.seed = c.seed;
    m_.inputs = c.inputs;
  }

  std::ofstream open(const std::string& name) {
    std::ofstream out(dir_ / name, std::ios::binary | std::ios::trunc);
    if (!out) throw CliFailure(kExitUsage, "output-not-writable", (dir_ / name).string());
    m_.outputs.push_back(name);
    return out;
  }
  void write_json(const std::string& name, const json& j) {
    auto out = open(name);
    out << j.dump(2) << '\n';
  }
  RunManifest& manifest() { return m_; }

  void finish() {
    const json j = m_.to_json(dir_);
    std::ofstream out(dir_ / "manifest.json", std::ios::binary | std::ios::trunc);
    if (!out) throw CliFailure(kExitUsage, "output-not-writable", "manifest.json");
    out << j.dump(2) << '\n';
    logger()->info("{}: wrote {} outputs to {}", m_.command, m_.outputs.size(), dir_.string());
  }

 private:
  fs::path dir_;
  RunManifest m_;
};

// ---------------------------------------------------------------- corpus

int cmd_corpus(const Common& c) {
  require_inputs(c, 1, 1);
  const json raw = load_config(c.config);
  reject_unknown(raw, {"remove_tags", "keep_attrs"});
  dom::CleaningConfig cleaning = dom::CleaningConfig::defaults();
  if (raw.contains("remove_tags")) {
    const auto v = config_value<std::vector<std::string>>(raw, "remove_tags", {});
    cleaning.remove_tags = {v.begin(), v.end()};
  }
  if (raw.contains("keep_attrs")) {
    const auto v = config_value<std::vector<std::string>>(raw, "keep_attrs", {});
    cleaning.keep_attrs = {v.begin(), v.end()};
  }
  const fs::path dir = prepare_output(c);

  auto source = corpus::open_source(c.inputs.front());
  std::vector<corpus::CorpusRecord> records;
  while (auto rec = source->next()) records.push_back(std::move(*rec));
  const auto& ingest = source->counters();
  logger()->info("corpus: read {} html records", records.size());

  struct Processed {
    corpus::FilterDecision decision;
    std::vector<std::string> subtrees;
    std::vector<std::size_t> tokens;
  };
  std::vector<Processed> done(records.size());
  parallel_for(records.size(), c.jobs, [&](std::size_t i) {
    Processed& p = done[i];
    p.decision = corpus::filter_doc(records[i]);
    if (!p.decision.keep()) return;
    const dom::Node doc = dom::annotate_refs(dom::clean(dom::parse(records[i].html), cleaning));
    for (const auto& sub : corpus::extract_label_subtrees(doc)) {
      p.subtrees.push_back(dom::serialize(sub));
      p.tokens.push_back(default_tokenizer().count(p.subtrees.back()));
    }
  });

  Run run("corpus", c, dir);
  run.manifest().config = {{"remove_tags", cleaning.remove_tags},
                           {"keep_attrs", cleaning.keep_attrs}};
  auto& counters = run.manifest().counters;
  counters["records_read"] = static_cast<std::int64_t>(ingest.records_read);
  counters["html_records"] = static_cast<std::int64_t>(ingest.html_records);
  counters["skipped_records"] = static_cast<std::int64_t>(ingest.skipped);
  counters["warnings"] = static_cast<std::int64_t>(ingest.warnings);
  counters["kept"] = 0;
  counters["dropped_non_unicode"] = 0;
  counters["dropped_alphanumeric_only"] = 0;
  counters["label_subtrees"] = 0;
  counters["tokens_total"] = 0;

  corpus::StatsAccumulator stats;
  {
    auto subs = run.open("corpus.jsonl");
    auto dropped = run.open("dropped.jsonl");
    for (std::size_t i = 0; i < records.size(); ++i) {
      const auto& rec = records[i];
      const auto& p = done[i];
      if (!p.decision.keep()) {
        const std::string reason(corpus::to_string(*p.decision.drop));
        ++counters[reason == "non-unicode" ? "dropped_non_unicode" : "dropped_alphanumeric_only"];
        jsonl::write_line(dropped, {{"doc_id", rec.doc_id}, {"reason", reason}});
        continue;
      }
      ++counters["kept"];
      for (std::size_t k = 0; k < p.subtrees.size(); ++k) {
        jsonl::write_line(subs, {{"doc_id", rec.doc_id + "#" + std::to_string(k)},
                                 {"source_doc", rec.doc_id},
                                 {"url", rec.url ? json(*rec.url) : json(nullptr)},
                                 {"subtree_html", p.subtrees[k]},
                                 {"token_count", p.tokens[k]}});
        stats.add(p.tokens[k]);
        ++counters["label_subtrees"];
        counters["tokens_total"] += static_cast<std::int64_t>(p.tokens[k]);
      }
    }
  }
  run.write_json("stats.json", stats.finish().to_json());
  run.finish();
  return kExitOk;
}

// --------------------------------------------------------------- denoise

int cmd_denoise(const Common& c) {
  require_inputs(c, 1, 1);
  json raw = load_config(c.config);
  if (raw.contains("seed")) throw ConfigError("seed", "set the seed with --seed");
  denoise::DenoiseConfig cfg = denoise::DenoiseConfig::from_json(raw);
  cfg.seed = c.seed;
  cfg.validate();
  const fs::path dir = prepare_output(c);

  std::vector<TokenSeq> corpus;
  jsonl::for_each(c.inputs.front(), [&](const json& line) {
    try {
      corpus.push_back(default_tokenizer().tokenize(line.at("subtree_html").get<std::string>(),
                                                    line.at("doc_id").get<std::string>()));
    } catch (const json::exception& e) {
      throw ConfigError("input", std::string("corpus line lacks doc_id/subtree_html: ") + e.what());
    }
  });
  const auto out = denoise::emit_mixture(corpus, cfg, c.jobs);

  Run run("denoise", c, dir);
  run.manifest().config = cfg.to_json();
  auto& counters = run.manifest().counters;
  counters["documents"] = static_cast<std::int64_t>(corpus.size());
  counters["total"] = static_cast<std::int64_t>(out.examples.size());
  counters["skipped"] = static_cast<std::int64_t>(out.skipped.size());
  for (const auto& obj : cfg.components()) counters[obj.tag()] = 0;
  for (const auto& [tag, n] : out.component_counts) counters[tag] = static_cast<std::int64_t>(n);
  std::int64_t masked = 0;
  {
    auto ex = run.open("examples.jsonl");
    for (const auto& e : out.examples) {
      masked += static_cast<std::int64_t>(e.mask.masked_tokens());
      jsonl::write_line(ex, e.to_json());
    }
    auto sk = run.open("skipped.jsonl");
    for (const auto& s : out.skipped) {
      jsonl::write_line(sk, {{"doc_id", s.doc_id}, {"reason", s.reason}});
    }
  }
  counters["masked_tokens"] = masked;
  run.finish();
  return kExitOk;
}

// ---------------------------------------------------------------- layout

struct LayoutArgs {
  std::optional<std::size_t> L, r, k;
  bool block_edges = false;
  bool coo = false;
};

int cmd_layout(const Common& c, const LayoutArgs& a) {
  require_inputs(c, 0, 0);
  const json raw = load_config(c.config);
  reject_unknown(raw, {"L", "r", "k", "block_to_block", "coo"});
  layout::LayoutConfig cfg;
  cfg.seq_len = a.L.value_or(config_value<std::size_t>(raw, "L", 4096));
  cfg.local_radius = a.r.value_or(config_value<std::size_t>(raw, "r", 127));
  cfg.block_size = a.k.value_or(config_value<std::size_t>(raw, "k", 16));
  const bool block_edges = a.block_edges || config_value<bool>(raw, "block_to_block", false);
  const bool coo = a.coo || config_value<bool>(raw, "coo", false);
  const auto lay = layout::AttentionLayout::build(cfg);
  const fs::path dir = prepare_output(c);

  Run run("layout", c, dir);
  run.manifest().config = {{"L", cfg.seq_len},     {"r", cfg.local_radius},
                           {"k", cfg.block_size},  {"block_to_block", block_edges},
                           {"coo", coo}};
  const json summary = lay.summary(block_edges);
  run.write_json("layout.json", summary);
  if (coo) {
    auto out = run.open("layout_coo.txt");
    lay.write_coo(out, block_edges);
  }
  auto& counters = run.manifest().counters;
  counters["global_blocks"] = static_cast<std::int64_t>(lay.global_blocks());
  counters["nnz"] = summary.at("nnz").get<std::int64_t>();
  run.finish();
  return kExitOk;
}

// --------------------------------------------------------------- snippet

struct SnippetArgs {
  std::vector<std::int64_t> refs;
  std::optional<std::size_t> budget;
  bool truncate_only = false;
};

int cmd_snippet(const Common& c, const SnippetArgs& a) {
  require_inputs(c, 1, 1);
  const json raw = load_config(c.config);
  reject_unknown(raw, {"budget", "truncate_only"});
  const std::size_t budget = a.budget.value_or(config_value<std::size_t>(raw, "budget", 512));
  const bool truncate_only = a.truncate_only || config_value<bool>(raw, "truncate_only", false);
  if (a.refs.empty()) throw CliFailure(kExitUsage, "usage-error", "at least one --ref is required");
  if (budget < a.refs.size()) throw ConfigError("budget", "must be >= number of refs");

  const dom::Node doc = dom::annotate_refs(
      dom::clean(dom::parse(read_file(c.inputs.front())), dom::CleaningConfig::defaults()));
  snippet::SnippetOptions opts;
  opts.truncate_only = truncate_only;
  const auto batch = snippet::batch_extract(doc, a.refs, budget, opts);
  if (!batch.unresolved.empty()) {
    throw RetrieverError("unresolved data-ref " + std::to_string(batch.unresolved.front()));
  }
  const fs::path dir = prepare_output(c);

  Run run("snippet", c, dir);
  run.manifest().config = {{"budget", budget}, {"truncate_only", truncate_only}, {"refs", a.refs}};
  auto& counters = run.manifest().counters;
  counters["snippets"] = static_cast<std::int64_t>(batch.snippets.size());
  counters["tokens_total"] = 0;
  counters["tail_truncated"] = 0;
  {
    auto doc_out = run.open("document.html");
    doc_out << dom::serialize(doc) << '\n';
    auto out = run.open("snippets.jsonl");
    for (const auto& s : batch.snippets) {
      counters["tokens_total"] += static_cast<std::int64_t>(s.token_count);
      counters["tail_truncated"] += s.tail_truncated ? 1 : 0;
      jsonl::write_line(out, s.to_json());
    }
  }
  run.finish();
  return kExitOk;
}

// ----------------------------------------------------------------- agent

int cmd_agent(const Common& c, std::optional<std::size_t> samples_flag, std::ostream& out) {
  require_inputs(c, 1, std::numeric_limits<std::size_t>::max());
  const json raw = load_config(c.config);
  reject_unknown(raw, {"samples"});
  const std::size_t samples = samples_flag.value_or(config_value<std::size_t>(raw, "samples", 0));
  std::vector<agent::Task> tasks;
  for (const auto& in : c.inputs) tasks.push_back(agent::Task::load(in));
  const fs::path dir = prepare_output(c);

  Run run("agent", c, dir);
  run.manifest().config = {{"samples", samples}};
  auto& counters = run.manifest().counters;
  for (const char* k : {"episodes", "kept", "dropped", "success", "plan_errors", "demonstrations"}) {
    counters[k] = 0;
  }
  json table = json::array();
  std::vector<agent::Episode> kept;
  {
    auto log = run.open("episodes.jsonl");
    std::size_t index = 0;
    for (const auto& task : tasks) {
      const auto instructions = agent::task_instructions(task, samples, c.seed);
      auto result = agent::run_task(task, instructions, c.jobs);
      for (std::size_t i = 0; i < instructions.size(); ++i) {
        const auto& ep = result.episodes[i];
        const auto& decision = result.decisions[i];
        for (const auto& line : agent::episode_log(ep, index)) jsonl::write_line(log, line);
        ++index;
        ++counters["episodes"];
        if (ep.status.kind == agent::EpisodeStatus::Kind::kSuccess) ++counters["success"];
        if (ep.status.kind == agent::EpisodeStatus::Kind::kFiltered &&
            ep.status.reason == "plan_error") {
          ++counters["plan_errors"];
        }
        const auto& report = result.reports[i];
        json row{{"task", task.name},
                 {"instruction", ep.instruction},
                 {"status", ep.status.name()},
                 {"score", report ? json(report->score) : json(nullptr)},
                 {"kept", decision.keep()}};
        if (!decision.keep()) row["drop_reason"] = *decision.drop;
        table.push_back(row);
        if (decision.keep()) {
          ++counters["kept"];
          kept.push_back(ep);
        } else {
          ++counters["dropped"];
        }
      }
    }
  }
  {
    auto demo = run.open("demonstrations.jsonl");
    for (const auto& rec : agent::export_demonstrations(kept)) {
      jsonl::write_line(demo, rec);
      ++counters["demonstrations"];
    }
  }
  run.write_json("scores.json", table);
  run.finish();

  out << std::left << std::setw(14) << "task" << std::setw(7) << "score" << std::setw(11)
      << "status" << "instruction\n";
  for (const auto& row : table) {
    const std::string score = row["score"].is_null() ? "-" : std::to_string(row["score"].get<int>());
    out << std::left << std::setw(14) << row["task"].get<std::string>() << std::setw(7) << score
        << std::setw(11) << row["status"].get<std::string>()
        << row["instruction"].get<std::string>() << '\n';
  }
  return kExitOk;
}

void add_common(CLI::App* sub, Common& c, bool needs_input) {
  auto* in = sub->add_option("--input", c.inputs, "Input path (repeatable where noted)");
  if (needs_input) in->required();
  sub->add_option("--output", c.output, "Output directory")->required();
  sub->add_option("--seed", c.seed, "Seed for every random draw");
  sub->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::Range(1u, 1024u));
  sub->add_option("--config", c.config, "Config as inline JSON or a JSON file path");
}

void emit_error(std::ostream& err, const std::string& error, const std::string& message) {
  err << json{{"error", error}, {"message", message}}.dump() << '\n';
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"htmlforge: HTML corpus, denoising, layout, snippet and agent tooling"};
  app.require_subcommand(1);
  Common common;
  LayoutArgs layout_args;
  SnippetArgs snippet_args;
  std::optional<std::size_t> samples;

  auto* corpus = app.add_subcommand("corpus", "Ingest, filter, clean and annotate a corpus");
  add_common(corpus, common, true);
  auto* denoise = app.add_subcommand("denoise", "Emit denoising examples from corpus JSONL");
  add_common(denoise, common, true);
  auto* layout = app.add_subcommand("layout", "Build the local+global attention layout");
  add_common(layout, common, false);
  layout->add_option("--L", layout_args.L, "Sequence length");
  layout->add_option("--r", layout_args.r, "Local radius");
  layout->add_option("--k", layout_args.k, "Global block size");
  layout->add_flag("--block-edges", layout_args.block_edges, "Also link block summaries");
  layout->add_flag("--coo", layout_args.coo, "Write the edge list");
  auto* snip = app.add_subcommand("snippet", "Extract snippets around data-ref anchors");
  add_common(snip, common, true);
  snip->add_option("--ref", snippet_args.refs, "Anchor data-ref (repeatable)");
  snip->add_option("--budget", snippet_args.budget, "Total token budget");
  snip->add_flag("--truncate-only", snippet_args.truncate_only, "Cut the document instead");
  auto* agent_cmd = app.add_subcommand("agent", "Run task files end to end with scripted ports");
  add_common(agent_cmd, common, true);
  agent_cmd->add_option("--samples", samples, "Template-sampled instructions per task");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    emit_error(err, "usage-error", e.what());
    return kExitUsage;
  }

  try {
    if (*corpus) return cmd_corpus(common);
    if (*denoise) return cmd_denoise(common);
    if (*layout) return cmd_layout(common, layout_args);
    if (*snip) return cmd_snippet(common, snippet_args);
    if (*agent_cmd) return cmd_agent(common, samples, out);
    emit_error(err, "usage-error", "no subcommand");
    return kExitUsage;
  } catch (const CliFailure& e) {
    emit_error(err, e.error, e.what());
    return e.code;
  } catch (const ConfigError& e) {
    emit_error(err, "config-error", e.what());
    return kExitUsage;
  } catch (const RetrieverError& e) {
    emit_error(err, "retriever-error", e.what());
    return kExitDomain;
  } catch (const IngestError& e) {
    emit_error(err, "ingest-error", e.what());
    return kExitDomain;
  } catch (const Utf8Error& e) {
    emit_error(err, "utf8-error", e.what());
    return kExitDomain;
  } catch (const Error& e) {
    emit_error(err, "domain-error", e.what());
    return kExitDomain;
  } catch (const std::exception& e) {
    emit_error(err, "internal-error", e.what());
    return kExitInternal;
  }
}

}  // namespace htmlforge::cli
