#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>

#include "json.hpp"

namespace htmlforge::jsonl {

/// Calls `fn` for every non-blank line of a JSONL file, in order.
/// Throws Error on unreadable files or malformed lines (with line number).
void for_each(const std::filesystem::path& path,
              const std::function<void(const nlohmann::json&)>& fn);

/// Writes `value` as one compact line.
void write_line(std::ostream& out, const nlohmann::json& value);

}  // namespace htmlforge::jsonl
