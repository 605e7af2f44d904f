#include <algorithm>
#include <cmath>

#include "htmlforge/denoise/denoise.h"
#include "htmlforge/util/parallel.h"

namespace htmlforge::denoise {

void DenoiseConfig::validate() const {
  if (span_means.empty() && !prefix_lm) {
    throw ConfigError("span_means", "must be non-empty unless prefix_lm is on");
  }
  for (double mean : span_means) {
    if (!(mean > 0.0) || !std::isfinite(mean)) {
      throw ConfigError("span_means", "every mean must be a positive number");
    }
  }
  if (!(corruption_rate > 0.0 && corruption_rate < 1.0)) {
    throw ConfigError("corruption_rate", "must be in (0, 1)");
  }
  if (input_len == 0) throw ConfigError("input_len", "must be positive");
  if (output_len == 0) throw ConfigError("output_len", "must be positive");
  if (!span_means.empty() && corruption_rate * static_cast<double>(input_len) < 1.0) {
    throw ConfigError("corruption_rate", "corruption_rate * input_len must be >= 1");
  }
  if (!(span_sd_ratio >= 0.0) || !std::isfinite(span_sd_ratio)) {
    throw ConfigError("span_sd_ratio", "must be a non-negative number");
  }
}

std::vector<Objective> DenoiseConfig::components() const {
  std::vector<Objective> out;
  for (double mean : span_means) out.push_back(Objective::span(mean));
  if (prefix_lm) out.push_back(Objective::prefix());
  return out;
}

namespace {

template <typename T>
T field(const nlohmann::json& j, const char* name) {
  try {
    return j.at(name).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(name, "has the wrong type");
  }
}

}  // namespace

DenoiseConfig DenoiseConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config", "must be a JSON object");
  DenoiseConfig cfg;
  for (const auto& [key, value] : j.items()) {
    if (key == "span_means") {
      cfg.span_means = field<std::vector<double>>(j, "span_means");
    } else if (key == "corruption_rate") {
      cfg.corruption_rate = field<double>(j, "corruption_rate");
    } else if (key == "input_len") {
      cfg.input_len = field<std::size_t>(j, "input_len");
    } else if (key == "output_len") {
      cfg.output_len = field<std::size_t>(j, "output_len");
    } else if (key == "seed") {
      cfg.seed = field<std::uint64_t>(j, "seed");
    } else if (key == "prefix_lm") {
      cfg.prefix_lm = field<bool>(j, "prefix_lm");
    } else if (key == "span_sd_ratio") {
      cfg.span_sd_ratio = field<double>(j, "span_sd_ratio");
    } else if (key == "budget_policy") {
      const auto policy = field<std::string>(j, "budget_policy");
      if (policy == "exact") {
        cfg.budget_policy = BudgetPolicy::kExact;
      } else if (policy == "expected") {
        cfg.budget_policy = BudgetPolicy::kExpected;
      } else {
        throw ConfigError("budget_policy", "must be \"exact\" or \"expected\"");
      }
    } else {
      throw ConfigError(key, "unknown key");
    }
    (void)value;
  }
  return cfg;
}

nlohmann::json DenoiseConfig::to_json() const {
  return nlohmann::json{
      {"span_means", span_means},
      {"corruption_rate", corruption_rate},
      {"input_len", input_len},
      {"output_len", output_len},
      {"seed", seed},
      {"prefix_lm", prefix_lm},
      {"span_sd_ratio", span_sd_ratio},
      {"budget_policy", budget_policy == BudgetPolicy::kExact ? "exact" : "expected"}};
}

std::variant<DenoisingExample, SkippedDoc> emit_one(const TokenSeq& doc,
                                                    const DenoiseConfig& cfg) {
  const std::vector<Objective> comps = cfg.components();
  Rng rng(derive_seed(cfg.seed, doc.doc_id));
  const Objective objective = comps[rng.uniform_below(comps.size())];
  const ViewLimits limits{cfg.input_len, cfg.output_len};

  if (objective.kind == Objective::Kind::kPrefix) {
    auto ex = make_prefix_example(doc, rng, limits);
    if (!ex) return SkippedDoc{doc.doc_id, "too-short-for-prefix"};
    return std::move(*ex);
  }
  if (doc.empty()) return SkippedDoc{doc.doc_id, "empty-document"};
  SpanOptions options;
  options.sd_ratio = cfg.span_sd_ratio;
  options.policy = cfg.budget_policy;
  SpanMask mask;
  try {
    mask = sample_spans(doc.size(), objective.mean, cfg.corruption_rate, rng, options);
  } catch (const SpanPlacementError&) {
    return SkippedDoc{doc.doc_id, "span-placement-failed"};
  }
  if (mask.spans.empty()) return SkippedDoc{doc.doc_id, "empty-mask"};
  DenoisingExample ex = apply_mask(doc, mask, limits);
  ex.objective = objective;
  return ex;
}

MixtureOutput emit_mixture(std::span<const TokenSeq> corpus, const DenoiseConfig& cfg,
                           unsigned jobs) {
  cfg.validate();
  std::vector<std::variant<DenoisingExample, SkippedDoc>> results(corpus.size());
  parallel_for(corpus.size(), jobs,
               [&](std::size_t i) { results[i] = emit_one(corpus[i], cfg); });

  MixtureOutput out;
  for (const auto& comp : cfg.components()) out.component_counts[comp.tag()] = 0;
  for (auto& r : results) {
    if (auto* ex = std::get_if<DenoisingExample>(&r)) {
      ++out.component_counts[ex->objective.tag()];
      out.examples.push_back(std::move(*ex));
    } else {
      out.skipped.push_back(std::get<SkippedDoc>(r));
    }
  }
  return out;
}

}  // namespace htmlforge::denoise
