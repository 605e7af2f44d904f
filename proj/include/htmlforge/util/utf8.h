#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace htmlforge::utf8 {

/// Offset of the first byte that breaks UTF-8 well-formedness, if any.
/// Overlong forms, surrogates and code points past U+10FFFF are rejected.
std::optional<std::size_t> first_invalid(std::string_view bytes);

inline bool is_valid(std::string_view bytes) {
  return !first_invalid(bytes).has_value();
}

/// Throws Utf8Error when `bytes` is not valid UTF-8.
void require_valid(std::string_view bytes);

void append(std::string& out, char32_t cp);

}  // namespace htmlforge::utf8
