#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <string>

#include "htmlforge/agent/episode.h"
#include "htmlforge/agent/fixture_site.h"
#include "htmlforge/agent/instruction_template.h"
#include "htmlforge/agent/plan.h"
#include "htmlforge/agent/program.h"
#include "htmlforge/agent/task.h"
#include "htmlforge/util/error.h"
#include "oracles.h"

namespace htmlforge::agent {
namespace {

const char* const kTasks[] = {"real_estate", "social_media", "map"};

Task load_task(const std::string& name) {
  return Task::load(std::string(HTMLFORGE_FIXTURE_DIR) + "/agent/" + name + "/task.json");
}

std::vector<std::string> texts(const Plan& plan) {
  std::vector<std::string> out;
  for (const auto& s : plan.sub_instructions()) out.push_back(s.text);
  return out;
}

// Planner that replays a fixed list of sub-instructions, then repeats the
// last one forever.
class ListPlanner final : public Planner {
 public:
  explicit ListPlanner(std::vector<SubInstruction> subs) : subs_(std::move(subs)) {}
  SubInstruction next(const PlannerRequest& req) override {
    return subs_[std::min(req.history.size(), subs_.size() - 1)];
  }

 private:
  std::vector<SubInstruction> subs_;
};

struct SiteRig {
  explicit SiteRig(const Task& task)
      : planner(task.rules), summarizer(task.snippet_budget),
        executor(FixtureSite::load(task.fixture_site_path)) {}
  Ports ports() { return {planner, summarizer, programmer, executor}; }
  ScriptedPlanner planner;
  ScriptedSummarizer summarizer;
  ScriptedProgrammer programmer;
  FixtureExecutor executor;
};

Scorer scorer_for(const Task& task, const std::string& instruction) {
  const auto required = required_attributes(scripted_plan(instruction, task.rules), task);
  return [required](const Episode& ep) { return score_episode(ep, required); };
}

// Fault injectors wrapping the scripted ports.
class GarbageProgrammer final : public Programmer {
 public:
  explicit GarbageProgrammer(Programmer& inner) : inner_(inner) {}
  std::string write(const SubInstruction& sub, std::span<const snippet::Snippet> s) override {
    if (sub.text.rfind("click", 0) == 0) return "driver.frobnicate()";
    return inner_.write(sub, s);
  }

 private:
  Programmer& inner_;
};

class ForgetfulSummarizer final : public Summarizer {
 public:
  explicit ForgetfulSummarizer(Summarizer& inner) : inner_(inner) {}
  SummaryResult summarize(const SubInstruction& sub, const std::string& html) override {
    SubInstruction broken = sub;
    for (auto& r : broken.refs) r += 100000;
    return inner_.summarize(broken, html);
  }

 private:
  Summarizer& inner_;
};

class StrayNavigationProgrammer final : public Programmer {
 public:
  explicit StrayNavigationProgrammer(Programmer& inner) : inner_(inner) {}
  std::string write(const SubInstruction& sub, std::span<const snippet::Snippet> s) override {
    if (sub.text.rfind("go to", 0) == 0) return render({Command::Verb::kGet, -1, "http://elsewhere.test/"});
    return inner_.write(sub, s);
  }

 private:
  Programmer& inner_;
};

TEST(Template, SingleSlot) {
  InstructionTemplate t{"go to <site>", {{"site", {"A"}}}};
  Rng rng(1);
  EXPECT_EQ(sample_instruction(t, rng), "go to A");
}

TEST(Template, UnknownPlaceholderIsConfigError) {
  InstructionTemplate t{"go to <site> via <road>", {{"site", {"A"}}}};
  EXPECT_THROW(t.validate(), ConfigError);
  InstructionTemplate empty{"go to <site>", {{"site", {}}}};
  EXPECT_THROW(empty.validate(), ConfigError);
}

TEST(Template, MapTemplateLeavesNoPlaceholders) {
  const Task map = load_task("map");
  Rng rng(3);
  for (const auto& t : map.templates) {
    for (int i = 0; i < 100; ++i) {
      const std::string s = sample_instruction(t, rng);
      EXPECT_EQ(s.find('<'), std::string::npos) << s;
    }
  }
  EXPECT_EQ(map.templates[0].placeholders().size(), 4u);
}

TEST(Template, TwoByTwoGridFullyCovered) {
  InstructionTemplate t{"<a>-<b>", {{"a", {"x", "y"}}, {"b", {"1", "2"}}}};
  Rng rng(5);
  std::set<std::string> seen;
  for (int i = 0; i < 10000; ++i) seen.insert(sample_instruction(t, rng));
  EXPECT_EQ(seen, (std::set<std::string>{"x-1", "x-2", "y-1", "y-2"}));
}

TEST(Template, DeterministicUnderSeed) {
  const Task task = load_task("social_media");
  Rng a(9);
  Rng b(9);
  for (int i = 0; i < 50; ++i)
    EXPECT_EQ(sample_instruction(task.templates[1], a), sample_instruction(task.templates[1], b));
}

TEST(Slug, Rules) {
  EXPECT_EQ(slug("2+ Baths"), "2plus-baths");
  EXPECT_EQ(slug("  Corporate housing!"), "corporate-housing");
  EXPECT_EQ(slug("r/learnpython"), "r-learnpython");
}

TEST(ScriptedPlan, WorkedRealEstateExample) {
  const Task task = load_task("real_estate");
  const Plan plan = scripted_plan(
      "search 2 bedroom and 2+ bathroom houses in new york, ny with a max price of $7500",
      task.rules);
  const auto subs = texts(plan);
  const auto at = [&](const std::string& s) {
    return std::find(subs.begin(), subs.end(), s) - subs.begin();
  };
  ASSERT_LT(at("type in new york into search"), static_cast<long>(subs.size()));
  ASSERT_LT(at("type in 7500 into max rent"), static_cast<long>(subs.size()));
  EXPECT_LT(at("type in new york into search"), at("type in 7500 into max rent"));
  EXPECT_EQ(subs.front().rfind("go to ", 0), 0u);
  EXPECT_TRUE(plan.sub_instructions().back().terminal);
  EXPECT_EQ(subs.back(), "END");
}

TEST(ScriptedPlan, MinimalPath) {
  const Task task = load_task("real_estate");
  const Plan plan = scripted_plan("search homes in new york, ny", task.rules);
  const auto subs = texts(plan);
  ASSERT_EQ(subs.size(), 4u);
  EXPECT_EQ(subs[0], "go to " + task.start_url);
  EXPECT_EQ(subs[1], "type in new york into search");
  EXPECT_EQ(subs[2], "submit the search");
  EXPECT_EQ(subs[3], "END");
}

TEST(ScriptedPlan, NoRuleMatchesIsPlanError) {
  const Task task = load_task("real_estate");
  EXPECT_THROW(scripted_plan("bake a cake", task.rules), PlanError);
}

TEST(ScriptedPlan, AllBundledInstructionsParse) {
  std::size_t total = 0;
  for (const char* name : kTasks) {
    const Task task = load_task(name);
    EXPECT_EQ(task.instructions.size(), 20u) << name;
    for (const auto& ins : task.instructions) {
      EXPECT_NO_THROW(scripted_plan(ins, task.rules)) << ins;
      ++total;
    }
  }
  EXPECT_EQ(total, 60u);
}

TEST(ScriptedPlan, TerminalIffEndMarker) {
  for (const char* name : kTasks) {
    const Task task = load_task(name);
    for (const auto& ins : task.instructions) {
      for (const auto& s : scripted_plan(ins, task.rules).sub_instructions())
        EXPECT_EQ(s.terminal, s.text == task.rules.end_marker) << s.text;
    }
  }
}

TEST(Program, RenderParseRoundTrip) {
  const std::vector<Command> cmds{{Command::Verb::kGet, -1, "site://x/a b.html"},
                                  {Command::Verb::kClear, 3, ""},
                                  {Command::Verb::kSendKeys, 3, "new \"york\"\\"},
                                  {Command::Verb::kClick, 4, ""},
                                  {Command::Verb::kSubmit, 5, ""},
                                  {Command::Verb::kScroll, 6, "200"}};
  std::string program = "# comment line\n";
  for (const auto& c : cmds) program += render(c) + "\n";
  const auto parsed = parse_program(program);
  ASSERT_EQ(parsed.size(), cmds.size());
  for (std::size_t i = 0; i < cmds.size(); ++i) {
    EXPECT_EQ(parsed[i].verb, cmds[i].verb);
    EXPECT_EQ(render(parsed[i]), render(cmds[i]));
  }
  EXPECT_THROW(parse_program("driver.frobnicate()"), ProgramSyntaxError);
}

TEST(Program, SelectorDialect) {
  EXPECT_EQ(render({Command::Verb::kClick, 175, ""}),
            "driver.find_element(By.CSS_SELECTOR, '[data-ref=\"175\"]').click()");
}

TEST(Episode, ScriptedSuccessOnEverySite) {
  for (const char* name : kTasks) {
    const Task task = load_task(name);
    const std::string& ins = task.instructions.front();
    SiteRig rig(task);
    const Episode ep = run_episode(ins, rig.ports(), {task.max_steps, {ExecStatus::Kind::kProgramError}},
                                   scorer_for(task, ins));
    EXPECT_EQ(ep.status.kind, EpisodeStatus::Kind::kSuccess) << name << ": " << ep.status.name();
    ASSERT_FALSE(ep.steps.empty());
    EXPECT_EQ(ep.steps.front().sub_instruction.text, "go to " + task.start_url);
    EXPECT_TRUE(ep.steps.back().sub_instruction.terminal);
    EXPECT_TRUE(filter_episode(ep, task.url_allow_prefixes).keep());
  }
}

TEST(Episode, ImmediatelyTerminalIsOneStep) {
  const Task task = load_task("real_estate");
  SiteRig rig(task);
  ListPlanner planner({{"END", {}, true}});
  const Episode ep =
      run_episode("anything", {planner, rig.summarizer, rig.programmer, rig.executor}, {});
  ASSERT_EQ(ep.steps.size(), 1u);
  EXPECT_TRUE(ep.steps[0].program.empty());
  EXPECT_EQ(ep.status.kind, EpisodeStatus::Kind::kSuccess);
}

TEST(Episode, NeverTerminalStopsAtMaxSteps) {
  const Task task = load_task("map");
  SiteRig rig(task);
  ListPlanner planner({{"go to " + task.start_url, {}, false}});
  RunPolicy policy;
  policy.max_steps = 5;
  const Episode ep =
      run_episode("loop", {planner, rig.summarizer, rig.programmer, rig.executor}, policy);
  EXPECT_EQ(ep.steps.size(), 5u);
  EXPECT_EQ(ep.status.kind, EpisodeStatus::Kind::kMaxSteps);
}

TEST(Episode, TerminationBoundHoldsForAnyBudget) {
  const Task task = load_task("social_media");
  for (std::size_t max = 1; max <= 12; ++max) {
    SiteRig rig(task);
    RunPolicy policy;
    policy.max_steps = max;
    const Episode ep = run_episode(task.instructions[3], rig.ports(), policy);
    EXPECT_LE(ep.steps.size(), max);
  }
}

TEST(Episode, PlanErrorIsFiltered) {
  const Task task = load_task("real_estate");
  SiteRig rig(task);
  const Episode ep = run_episode("bake a cake", rig.ports(), {});
  EXPECT_EQ(ep.status, EpisodeStatus::filtered("plan_error"));
  EXPECT_EQ(filter_episode(ep, task.url_allow_prefixes).drop, "plan_error");
}

TEST(Episode, ProgramErrorAbortsByDefault) {
  const Task task = load_task("real_estate");
  SiteRig rig(task);
  GarbageProgrammer bad(rig.programmer);
  const Episode ep = run_episode(task.instructions[0],
                                 {rig.planner, rig.summarizer, bad, rig.executor}, {});
  EXPECT_EQ(ep.status, EpisodeStatus::filtered("program_error"));
  EXPECT_EQ(ep.steps.back().exec_status.kind, ExecStatus::Kind::kProgramError);
}

TEST(Episode, RetrieverErrorMeansIncompleteSnippets) {
  const Task task = load_task("real_estate");
  SiteRig rig(task);
  ForgetfulSummarizer bad(rig.summarizer);
  const Episode ep = run_episode(task.instructions[0],
                                 {rig.planner, bad, rig.programmer, rig.executor}, {});
  bool saw = false;
  for (const auto& step : ep.steps) {
    if (step.exec_status.kind != ExecStatus::Kind::kRetrieverError) continue;
    saw = true;
    EXPECT_LT(step.snippets.size(), step.sub_instruction.refs.size());
  }
  EXPECT_TRUE(saw);
}

TEST(Scoring, ThreeOfFiveIsSixty) {
  const ScoreReport r = ScoreReport::make({"a", "b", "c", "d", "e"}, {"a", "c", "e"});
  EXPECT_EQ(r.score, 60);
  EXPECT_FALSE(r.success);
  EXPECT_EQ(r.covered, (std::vector<std::string>{"a", "c", "e"}));
  EXPECT_EQ(ScoreReport::make({"a", "b"}, {}).score, 0);
  const ScoreReport full = ScoreReport::make({"a", "b"}, {"b", "a"});
  EXPECT_EQ(full.score, 100);
  EXPECT_TRUE(full.success);
}

TEST(Scoring, ExhaustiveAgainstRationalArithmetic) {
  for (long long r = 1; r <= 300; ++r) {
    for (long long c = 0; c <= r; ++c) {
      const auto q = oracle::coverage_rational(c, r);
      // Round half up on num/den.
      const long long want = (2 * q.num + q.den) / (2 * q.den);
      ASSERT_EQ(coverage_score(static_cast<std::size_t>(c), static_cast<std::size_t>(r)), want)
          << c << "/" << r;
      std::vector<std::string> req;
      std::vector<std::string> cov;
      for (long long i = 0; i < r; ++i) req.push_back("a" + std::to_string(i));
      if (r <= 40) {
        for (long long i = 0; i < c; ++i) cov.push_back(req[static_cast<std::size_t>(i)]);
        const ScoreReport rep = ScoreReport::make(req, cov);
        ASSERT_EQ(rep.success, rep.score == 100);
        ASSERT_GE(rep.score, 0);
        ASSERT_LE(rep.score, 100);
      }
    }
  }
  EXPECT_THROW(coverage_score(1, 0), std::invalid_argument);
  EXPECT_THROW(coverage_score(3, 2), std::invalid_argument);
}

TEST(Scoring, PredicatesOverTraceRecords) {
  Episode ep;
  EpisodeStep step;
  step.records = {"page=listings.html verb=click ref=7 id=beds-2 value="};
  ep.steps.push_back(step);
  const auto r = score_episode(ep, {{"beds", "id=beds-2\\b"}, {"baths", "id=baths-2plus\\b"}});
  EXPECT_EQ(r.score, 50);
  EXPECT_EQ(r.covered, (std::vector<std::string>{"beds"}));
}

TEST(Filter, Rules) {
  Episode ep;
  EpisodeStep ok;
  ok.url = "site://real-estate/index.html";
  ep.steps = {ok, ok};
  EXPECT_TRUE(filter_episode(ep, {"site://real-estate/"}).keep());
  EXPECT_EQ(filter_episode(ep, {"site://map/"}).drop, "url_prefix");
  ep.steps[1].exec_status = ExecStatus::program_error("boom");
  EXPECT_EQ(filter_episode(ep, {"site://real-estate/"}).drop, "program_error");
  ep.steps[1].exec_status = ExecStatus::retriever_error("gone");
  EXPECT_EQ(filter_episode(ep, {"site://real-estate/"}).drop, "retriever_error");
}

TEST(Filter, AddingAFaultNeverRestoresKeep) {
  const Task task = load_task("map");
  const TaskResult base = run_task(task, task.instructions);
  Rng rng(21);
  for (std::size_t e = 0; e < base.episodes.size(); ++e) {
    Episode ep = base.episodes[e];
    bool kept = filter_episode(ep, task.url_allow_prefixes).keep();
    for (int f = 0; f < 6; ++f) {
      auto& step = ep.steps[rng.uniform_below(ep.steps.size())];
      switch (rng.uniform_below(3)) {
        case 0: step.exec_status = ExecStatus::program_error("x"); break;
        case 1: step.exec_status = ExecStatus::retriever_error("x"); break;
        default: step.url = "http://elsewhere.test/"; break;
      }
      const bool now = filter_episode(ep, task.url_allow_prefixes).keep();
      EXPECT_FALSE(!kept && now);
      EXPECT_FALSE(now);
      kept = now;
    }
  }
}

TEST(Filter, ThreeSeededFaultsOfTenLeaveSeven) {
  const Task task = load_task("real_estate");
  std::vector<Episode> episodes;
  for (std::size_t i = 0; i < 10; ++i) {
    SiteRig rig(task);
    GarbageProgrammer garbage(rig.programmer);
    ForgetfulSummarizer forgetful(rig.summarizer);
    StrayNavigationProgrammer stray(rig.programmer);
    Summarizer* summarizer = &rig.summarizer;
    Programmer* programmer = &rig.programmer;
    if (i == 2) programmer = &garbage;
    if (i == 5) summarizer = &forgetful;
    if (i == 8) programmer = &stray;
    const std::string& ins = task.instructions[i];
    episodes.push_back(run_episode(ins, {rig.planner, *summarizer, *programmer, rig.executor},
                                   {task.max_steps, {ExecStatus::Kind::kProgramError}},
                                   scorer_for(task, ins)));
  }
  std::size_t kept = 0;
  std::vector<std::string> reasons;
  for (const auto& ep : episodes) {
    const auto d = filter_episode(ep, task.url_allow_prefixes);
    if (d.keep())
      ++kept;
    else
      reasons.push_back(*d.drop);
  }
  EXPECT_EQ(kept, 7u);
  EXPECT_EQ(reasons.size(), 3u);
  EXPECT_EQ(reasons[0], "program_error");
  EXPECT_EQ(reasons[1], "retriever_error");
}

TEST(Export, OneRecordPerStepWithGrowingHistory) {
  const Task task = load_task("social_media");
  SiteRig rig(task);
  const Episode ep = run_episode(task.instructions[0], rig.ports(), {});
  const auto records = export_demonstrations({ep});
  ASSERT_EQ(records.size(), ep.steps.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    EXPECT_EQ(records[i]["history"].size(), i);
    EXPECT_EQ(records[i]["target"], ep.steps[i].sub_instruction.text);
    for (const char* k : {"instruction", "history", "doc", "target", "target_refs"})
      EXPECT_TRUE(records[i].contains(k)) << k;
  }
  EXPECT_TRUE(export_demonstrations({}).empty());
}

TEST(Export, CountEqualsKeptStepTotal) {
  for (const char* name : kTasks) {
    const Task task = load_task(name);
    const TaskResult res = run_task(task, task_instructions(task, 10, 4), 4);
    std::vector<Episode> kept;
    std::size_t steps = 0;
    for (std::size_t i = 0; i < res.episodes.size(); ++i) {
      if (!res.decisions[i].keep()) continue;
      kept.push_back(res.episodes[i]);
      steps += res.episodes[i].steps.size();
    }
    EXPECT_EQ(kept.size(), res.episodes.size()) << name;
    EXPECT_EQ(export_demonstrations(kept).size(), steps);
  }
}

TEST(EndToEnd, EveryBundledInstructionScoresFull) {
  for (const char* name : kTasks) {
    const Task task = load_task(name);
    const TaskResult res = run_task(task, task_instructions(task, 20, 1), 4);
    ASSERT_EQ(res.episodes.size(), 40u);
    for (std::size_t i = 0; i < res.episodes.size(); ++i) {
      ASSERT_TRUE(res.reports[i].has_value()) << res.episodes[i].instruction;
      EXPECT_EQ(res.reports[i]->score, 100) << res.episodes[i].instruction;
      EXPECT_TRUE(res.decisions[i].keep()) << res.episodes[i].instruction;
      EXPECT_EQ(res.episodes[i].status.kind, EpisodeStatus::Kind::kSuccess);
    }
  }
}

TEST(Replay, TwoRunsAreByteIdentical) {
  const Task task = load_task("map");
  Transcript transcript;
  std::string recorded;
  {
    SiteRig rig(task);
    RecordingPlanner p(rig.planner, transcript);
    RecordingSummarizer s(rig.summarizer, transcript);
    RecordingProgrammer g(rig.programmer, transcript);
    for (const auto& ins : task.instructions)
      recorded += run_episode(ins, {p, s, g, rig.executor}, {}).to_json().dump() + "\n";
  }
  const Transcript loaded = Transcript::from_json(transcript.to_json());
  auto replay = [&] {
    std::string out;
    FixtureExecutor executor(FixtureSite::load(task.fixture_site_path));
    ReplayPlanner p(loaded);
    ReplaySummarizer s(loaded);
    ReplayProgrammer g(loaded);
    for (const auto& ins : task.instructions)
      out += run_episode(ins, {p, s, g, executor}, {}).to_json().dump() + "\n";
    return out;
  };
  const std::string first = replay();
  EXPECT_EQ(first, replay());
  EXPECT_EQ(first, recorded);
}

TEST(Replay, MissingEntryRaises) {
  Transcript empty;
  ReplayPlanner p(empty);
  EXPECT_THROW(p.next({"x", {}, ""}), Error);
}

}  // namespace
}  // namespace htmlforge::agent
