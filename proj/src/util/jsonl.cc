#include "htmlforge/util/jsonl.h"

#include <fstream>

#include "htmlforge/util/error.h"

namespace htmlforge::jsonl {

void for_each(const std::filesystem::path& path,
              const std::function<void(const nlohmann::json&)>& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json value;
    try {
      value = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(path.string() + ":" + std::to_string(line_no) + ": " +
                  e.what());
    }
    fn(value);
  }
}

void write_line(std::ostream& out, const nlohmann::json& value) {
  out << value.dump(-1, ' ', false,
                    nlohmann::json::error_handler_t::strict)
      << '\n';
}

}  // namespace htmlforge::jsonl
