#include "htmlforge/agent/program.h"

#include <cctype>

namespace htmlforge::agent {
namespace {

constexpr std::string_view kGet = "driver.get(";
constexpr std::string_view kFind = "driver.find_element(By.CSS_SELECTOR, '[data-ref=\"";
constexpr std::string_view kFindEnd = "\"]').";
constexpr std::string_view kScroll =
    "driver.execute_script('getScrollParent(document.querySelector(\"[data-ref=\\\\\"";
constexpr std::string_view kScrollMid = "\\\\\"]\")).scrollBy({top: ";
constexpr std::string_view kScrollEnd = "})')";

// Cursor over one statement; every method consumes on success only.
struct Cursor {
  std::string_view s;
  std::size_t pos = 0;

  bool eat(std::string_view lit) {
    if (s.substr(pos, lit.size()) != lit) return false;
    pos += lit.size();
    return true;
  }
  bool integer(std::string& out, bool allow_sign) {
    std::size_t p = pos;
    if (allow_sign && p < s.size() && s[p] == '-') ++p;
    const std::size_t digits = p;
    while (p < s.size() && std::isdigit(static_cast<unsigned char>(s[p]))) ++p;
    if (p == digits || p - digits > 18) return false;
    out = std::string(s.substr(pos, p - pos));
    pos = p;
    return true;
  }
  bool literal(std::string& out) {
    if (pos >= s.size() || s[pos] != '"') return false;
    std::string v;
    for (std::size_t p = pos + 1; p < s.size(); ++p) {
      const char c = s[p];
      if (c == '"') {
        out = std::move(v);
        pos = p + 1;
        return true;
      }
      if (c == '\\') {
        if (++p >= s.size()) return false;
        if (s[p] != '"' && s[p] != '\\') return false;
      }
      v.push_back(s[p]);
    }
    return false;
  }
  bool done() const { return pos == s.size(); }
};

std::string_view strip(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

Command parse_statement(std::string_view line, std::size_t lineno) {
  Cursor c{line};
  Command cmd;
  std::string num;
  if (c.eat(kGet)) {
    cmd.verb = Command::Verb::kGet;
    if (c.literal(cmd.value) && c.eat(")") && c.done()) return cmd;
  } else if (c.eat(kFind)) {
    if (c.integer(num, false) && c.eat(kFindEnd)) {
      cmd.ref = std::stoll(num);
      if (c.eat("clear()")) {
        cmd.verb = Command::Verb::kClear;
      } else if (c.eat("click()")) {
        cmd.verb = Command::Verb::kClick;
      } else if (c.eat("submit()")) {
        cmd.verb = Command::Verb::kSubmit;
      } else if (c.eat("send_keys(") && c.literal(cmd.value) && c.eat(")")) {
        cmd.verb = Command::Verb::kSendKeys;
      } else {
        throw ProgramSyntaxError(lineno, "unsupported element method");
      }
      if (c.done()) return cmd;
    }
  } else if (c.eat(kScroll)) {
    cmd.verb = Command::Verb::kScroll;
    std::string px;
    if (c.integer(num, false) && c.eat(kScrollMid) && c.integer(px, true) && c.eat(kScrollEnd) &&
        c.done()) {
      cmd.ref = std::stoll(num);
      cmd.value = px;
      return cmd;
    }
  }
  throw ProgramSyntaxError(lineno, "not a statement of the command dialect: " + std::string(line));
}

}  // namespace

std::string quote(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string_view verb_name(Command::Verb verb) {
  switch (verb) {
    case Command::Verb::kGet: return "get";
    case Command::Verb::kClear: return "clear";
    case Command::Verb::kSendKeys: return "type";
    case Command::Verb::kClick: return "click";
    case Command::Verb::kSubmit: return "submit";
    case Command::Verb::kScroll: return "scroll";
  }
  return "get";
}

std::string render(const Command& cmd) {
  const std::string ref = std::to_string(cmd.ref);
  const std::string find = std::string(kFind) + ref + std::string(kFindEnd);
  switch (cmd.verb) {
    case Command::Verb::kGet: return std::string(kGet) + quote(cmd.value) + ")";
    case Command::Verb::kClear: return find + "clear()";
    case Command::Verb::kSendKeys: return find + "send_keys(" + quote(cmd.value) + ")";
    case Command::Verb::kClick: return find + "click()";
    case Command::Verb::kSubmit: return find + "submit()";
    case Command::Verb::kScroll:
      return std::string(kScroll) + ref + std::string(kScrollMid) + cmd.value +
             std::string(kScrollEnd);
  }
  return {};
}

std::vector<Command> parse_program(std::string_view program) {
  std::vector<Command> out;
  std::size_t lineno = 0;
  while (!program.empty()) {
    ++lineno;
    const std::size_t nl = program.find('\n');
    const std::string_view raw = program.substr(0, nl);
    program = nl == std::string_view::npos ? std::string_view{} : program.substr(nl + 1);
    const std::string_view line = strip(raw);
    if (line.empty() || line.front() == '#') continue;
    out.push_back(parse_statement(line, lineno));
  }
  return out;
}

}  // namespace htmlforge::agent
