#include "htmlforge/corpus/pipeline.h"
#include "htmlforge/dom/html.h"
#include "htmlforge/util/utf8.h"

namespace htmlforge::corpus {

std::string_view to_string(DropReason reason) {
  switch (reason) {
    case DropReason::kNonUnicode: return "non-unicode";
    case DropReason::kAlphanumericOnly: return "alphanumeric-only";
  }
  return "unknown";
}

FilterDecision filter_doc(const CorpusRecord& rec) {
  if (!utf8::is_valid(rec.html)) return {DropReason::kNonUnicode};
  const std::string text = dom::text_content(dom::parse(rec.html));
  for (unsigned char c : text) {
    const bool alnum = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                       (c >= '0' && c <= '9');
    const bool space = c == ' ' || c == '\t' || c == '\n' || c == '\r' ||
                       c == '\f' || c == '\v';
    if (!alnum && !space) return {};
  }
  return {DropReason::kAlphanumericOnly};
}

}  // namespace htmlforge::corpus
