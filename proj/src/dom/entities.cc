#include <array>
#include <string>
#include <string_view>
#include <utility>

#include "htmlforge/dom/html.h"
#include "htmlforge/util/utf8.h"

namespace htmlforge::dom {

namespace {

// Common named references; anything else is left verbatim.
constexpr std::array<std::pair<std::string_view, char32_t>, 40> kNamed = {{
    {"amp", U'&'},       {"lt", U'<'},        {"gt", U'>'},
    {"quot", U'"'},      {"apos", U'\''},     {"nbsp", 0xA0},
    {"copy", 0xA9},      {"reg", 0xAE},       {"trade", 0x2122},
    {"hellip", 0x2026},  {"mdash", 0x2014},   {"ndash", 0x2013},
    {"lsquo", 0x2018},   {"rsquo", 0x2019},   {"ldquo", 0x201C},
    {"rdquo", 0x201D},   {"laquo", 0xAB},     {"raquo", 0xBB},
    {"middot", 0xB7},    {"bull", 0x2022},    {"times", 0xD7},
    {"divide", 0xF7},    {"euro", 0x20AC},    {"pound", 0xA3},
    {"yen", 0xA5},       {"cent", 0xA2},      {"sect", 0xA7},
    {"deg", 0xB0},       {"plusmn", 0xB1},    {"para", 0xB6},
    {"eacute", 0xE9},    {"egrave", 0xE8},    {"aacute", 0xE1},
    {"agrave", 0xE0},    {"uuml", 0xFC},      {"ouml", 0xF6},
    {"auml", 0xE4},      {"ntilde", 0xF1},    {"ccedil", 0xE7},
    {"szlig", 0xDF},
}};

bool is_alnum(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9');
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::string decode_entities(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c != '&') {
      out.push_back(c);
      ++i;
      continue;
    }
    const std::size_t semi = text.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 12) {
      out.push_back(c);
      ++i;
      continue;
    }
    const std::string_view body = text.substr(i + 1, semi - i - 1);
    bool decoded = false;
    if (body.size() >= 2 && body[0] == '#') {
      const bool hex = body[1] == 'x' || body[1] == 'X';
      const std::string_view digits = body.substr(hex ? 2 : 1);
      std::uint32_t cp = 0;
      bool ok = !digits.empty();
      for (char d : digits) {
        const int v = hex ? hex_value(d) : (d >= '0' && d <= '9' ? d - '0' : -1);
        if (v < 0) {
          ok = false;
          break;
        }
        cp = cp * (hex ? 16 : 10) + static_cast<std::uint32_t>(v);
        if (cp > 0x10FFFF) cp = 0x110000;
      }
      if (ok) {
        if (cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
          cp = 0xFFFD;
        }
        utf8::append(out, static_cast<char32_t>(cp));
        decoded = true;
      }
    } else if (!body.empty()) {
      bool plain = true;
      for (char b : body) plain = plain && is_alnum(b);
      if (plain) {
        for (const auto& [name, cp] : kNamed) {
          if (name == body) {
            utf8::append(out, cp);
            decoded = true;
            break;
          }
        }
      }
    }
    if (decoded) {
      i = semi + 1;
    } else {
      out.push_back(c);
      ++i;
    }
  }
  return out;
}

}  // namespace htmlforge::dom
