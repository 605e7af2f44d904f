#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "htmlforge/util/error.h"

namespace htmlforge::agent {

/// One statement of the selector-command dialect: WebDriver calls that
/// address elements only through '[data-ref="N"]' selectors.
struct Command {
  enum class Verb { kGet, kClear, kSendKeys, kClick, kSubmit, kScroll };
  Verb verb = Verb::kGet;
  std::int64_t ref = -1;  // unused by kGet
  std::string value;      // URL, typed text, or scroll offset in px

  friend bool operator==(const Command&, const Command&) = default;
};

class ProgramSyntaxError : public Error {
 public:
  ProgramSyntaxError(std::size_t line, const std::string& message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Source line for `cmd`, e.g.
///   driver.find_element(By.CSS_SELECTOR, '[data-ref="175"]').click()
std::string render(const Command& cmd);

/// Statements of `program`; blank lines and '#' comments are skipped.
/// Throws ProgramSyntaxError on any other line outside the dialect.
std::vector<Command> parse_program(std::string_view program);

/// Double-quoted literal with '"' and '\' escaped.
std::string quote(std::string_view text);

std::string_view verb_name(Command::Verb verb);

}  // namespace htmlforge::agent
