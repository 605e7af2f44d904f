#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "htmlforge/agent/ports.h"

namespace htmlforge::agent {

/// A directory of HTML pages plus transitions.json:
///   {"name": "...", "start": "index.html",
///    "transitions": [{"page", "action", "selector", "next"}]}
/// `page` may be "*". `selector` is "#id" or "#prefix*". `action` is a
/// dialect verb name (click, submit, type, clear, scroll).
/// Pages are addressed as site://<name>/<page>.
class FixtureSite {
 public:
  struct Transition {
    std::string page;
    std::string action;
    std::string selector;
    std::string next;
  };

  static std::shared_ptr<const FixtureSite> load(const std::filesystem::path& dir);

  const std::string& name() const noexcept { return name_; }
  std::string url_prefix() const { return "site://" + name_ + "/"; }
  std::string url_of(const std::string& page) const { return url_prefix() + page; }
  const std::string& start_page() const noexcept { return start_; }

  bool has_page(const std::string& page) const { return pages_.count(page) != 0; }
  /// Cleaned, ref-annotated page HTML. Throws std::out_of_range.
  const std::string& page_html(const std::string& page) const { return pages_.at(page); }

  /// Destination for (page, action, element id), or empty.
  std::string next_page(const std::string& page, const std::string& action,
                        const std::string& element_id) const;

 private:
  std::string name_;
  std::string start_;
  std::map<std::string, std::string> pages_;
  std::vector<Transition> transitions_;
};

/// Executes dialect programs against a FixtureSite. Trace lines look like
///   page=index.html verb=type ref=3 id=search value=new york
/// A get outside the site is bad_url; a syntax error, an unknown page or
/// a ref missing from the current page is program_error. A program with
/// no statements is a program_error too.
class FixtureExecutor final : public Executor {
 public:
  explicit FixtureExecutor(std::shared_ptr<const FixtureSite> site) : site_(std::move(site)) {}

  Observation reset() override;
  ExecResult execute(const std::string& program) override;

 private:
  Observation observe() const;

  std::shared_ptr<const FixtureSite> site_;
  std::string page_;  // empty before the first navigation
};

}  // namespace htmlforge::agent
