#include <algorithm>
#include <fstream>
#include <sstream>

#include "htmlforge/corpus/ingest.h"
#include "htmlforge/util/error.h"

namespace htmlforge::corpus {

namespace fs = std::filesystem;

DirectoryReader::DirectoryReader(const fs::path& root) : root_(root) {
  std::error_code ec;
  for (fs::recursive_directory_iterator it(root, ec), end; !ec && it != end;
       it.increment(ec)) {
    if (!it->is_regular_file()) continue;
    const auto ext = it->path().extension().string();
    if (ext == ".html" || ext == ".htm") files_.push_back(it->path());
  }
  if (ec) throw IngestError(root.string(), ec.message());
  std::sort(files_.begin(), files_.end(), [&](const fs::path& a, const fs::path& b) {
    return a.lexically_relative(root_).generic_string() <
           b.lexically_relative(root_).generic_string();
  });
}

std::optional<CorpusRecord> DirectoryReader::next() {
  if (index_ >= files_.size()) return std::nullopt;
  const fs::path& path = files_[index_++];
  const std::string id = path.lexically_relative(root_).generic_string();
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  if (!in || !(buf << in.rdbuf())) {
    // An empty file makes operator<< fail too; tell that apart from I/O.
    if (!in || fs::file_size(path) != 0) throw IngestError(id, "read failed");
  }
  ++counters_.records_read;
  ++counters_.html_records;
  return CorpusRecord{id, std::nullopt, buf.str()};
}

std::unique_ptr<RecordSource> open_source(const fs::path& path) {
  std::error_code ec;
  if (!fs::exists(path, ec)) throw IngestError("", "input-not-found: " + path.string());
  if (fs::is_directory(path)) return std::make_unique<DirectoryReader>(path);
  return WarcReader::open(path);
}

}  // namespace htmlforge::corpus
