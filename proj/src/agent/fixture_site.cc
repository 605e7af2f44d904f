#include "htmlforge/agent/fixture_site.h"

#include <fstream>
#include <sstream>

#include "htmlforge/agent/program.h"
#include "htmlforge/dom/html.h"
#include "htmlforge/util/error.h"

namespace htmlforge::agent {
namespace {

namespace fs = std::filesystem;

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ConfigError("fixture_site_path", "cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool selector_matches(const std::string& selector, const std::string& id) {
  if (selector.size() < 2 || selector[0] != '#') return false;
  const std::string_view pat = std::string_view(selector).substr(1);
  if (pat.back() == '*') {
    const auto prefix = pat.substr(0, pat.size() - 1);
    return std::string_view(id).substr(0, prefix.size()) == prefix;
  }
  return pat == id;
}

const dom::Node* find_ref(const dom::Node& doc, std::int64_t ref) {
  const dom::Node* hit = nullptr;
  dom::visit_elements(doc, [&](const dom::Node& n, const dom::NodePath&) {
    if (n.data_ref && static_cast<std::int64_t>(*n.data_ref) == ref) hit = &n;
    return hit == nullptr;
  });
  return hit;
}

}  // namespace

std::shared_ptr<const FixtureSite> FixtureSite::load(const fs::path& dir) {
  auto site = std::make_shared<FixtureSite>();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(dir / "transitions.json"));
    site->name_ = j.at("name").get<std::string>();
    site->start_ = j.at("start").get<std::string>();
    for (const auto& t : j.at("transitions")) {
      site->transitions_.push_back({t.at("page").get<std::string>(),
                                    t.at("action").get<std::string>(),
                                    t.at("selector").get<std::string>(),
                                    t.at("next").get<std::string>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("fixture_site_path", (dir / "transitions.json").string() + ": " + e.what());
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".html") files.push_back(entry);
  }
  for (const auto& f : files) {
    const dom::Node doc = dom::parse(read_file(f));
    site->pages_[f.filename().string()] =
        dom::serialize(dom::annotate_refs(dom::clean(doc, dom::CleaningConfig::defaults())));
  }
  if (!site->has_page(site->start_)) throw ConfigError("start", "no page " + site->start_);
  for (const auto& t : site->transitions_) {
    if (!site->has_page(t.next)) throw ConfigError("transitions", "no page " + t.next);
  }
  return site;
}

std::string FixtureSite::next_page(const std::string& page, const std::string& action,
                                   const std::string& element_id) const {
  for (const auto& t : transitions_) {
    if ((t.page == "*" || t.page == page) && t.action == action &&
        selector_matches(t.selector, element_id)) {
      return t.next;
    }
  }
  return {};
}

Observation FixtureExecutor::reset() {
  page_.clear();
  return observe();
}

Observation FixtureExecutor::observe() const {
  if (page_.empty()) return {"about:blank", ""};
  return {site_->url_of(page_), site_->page_html(page_)};
}

ExecResult FixtureExecutor::execute(const std::string& program) {
  ExecResult result;
  auto finish = [&](ExecStatus status) {
    result.status = std::move(status);
    result.observation = observe();
    return result;
  };
  std::vector<Command> cmds;
  try {
    cmds = parse_program(program);
  } catch (const ProgramSyntaxError& e) {
    return finish(ExecStatus::program_error(e.what()));
  }
  if (cmds.empty()) return finish(ExecStatus::program_error("program has no statements"));

  for (const auto& cmd : cmds) {
    if (cmd.verb == Command::Verb::kGet) {
      const std::string prefix = site_->url_prefix();
      if (cmd.value.compare(0, prefix.size(), prefix) != 0) {
        return finish(ExecStatus::bad_url(cmd.value));
      }
      const std::string page = cmd.value.substr(prefix.size());
      if (!site_->has_page(page)) return finish(ExecStatus::program_error("no page " + page));
      page_ = page;
      result.records.push_back("page=" + page_ + " verb=get url=" + cmd.value);
      continue;
    }
    if (page_.empty()) return finish(ExecStatus::program_error("no page loaded"));
    const dom::Node doc = dom::parse(site_->page_html(page_));
    const dom::Node* el = find_ref(doc, cmd.ref);
    if (el == nullptr) {
      return finish(ExecStatus::program_error("no element with data-ref " +
                                              std::to_string(cmd.ref)));
    }
    const std::string* id_attr = el->attr("id");
    const std::string id = id_attr ? *id_attr : "";
    const std::string verb(verb_name(cmd.verb));
    result.records.push_back("page=" + page_ + " verb=" + verb + " ref=" +
                             std::to_string(cmd.ref) + " id=" + id + " value=" + cmd.value);
    const std::string next = site_->next_page(page_, verb, id);
    if (!next.empty()) page_ = next;
  }
  return finish(ExecStatus::ok());
}

}  // namespace htmlforge::agent
