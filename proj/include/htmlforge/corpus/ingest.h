#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace htmlforge::corpus {

/// One HTML document pulled from a corpus source. `html` holds the raw
/// payload bytes; UTF-8 validity is checked by filter_doc, not here.
struct CorpusRecord {
  std::string doc_id;
  std::optional<std::string> url;
  std::string html;
};

struct IngestCounters {
  std::size_t records_read = 0;    // records fully read from the source
  std::size_t html_records = 0;    // yielded to the caller
  std::size_t skipped = 0;         // non-response or non-HTML records
  std::size_t warnings = 0;        // truncated or malformed tail
};

/// Pull-style record stream. next() returns nullopt at the end of the
/// source; a truncated tail ends the stream early and bumps `warnings`.
class RecordSource {
 public:
  virtual ~RecordSource() = default;
  virtual std::optional<CorpusRecord> next() = 0;
  const IngestCounters& counters() const noexcept { return counters_; }

 protected:
  IngestCounters counters_;
};

/// WARC 1.0/1.1 reader. Accepts plain or gzip (including per-record
/// multi-member gzip) input. Yields one record per `response` record whose
/// HTTP Content-Type is text/html or application/xhtml+xml.
class WarcReader final : public RecordSource {
 public:
  class ByteStream;

  static std::unique_ptr<WarcReader> open(const std::filesystem::path& path);
  static std::unique_ptr<WarcReader> from_bytes(std::string bytes);

  explicit WarcReader(std::unique_ptr<ByteStream> stream);
  ~WarcReader() override;

  std::optional<CorpusRecord> next() override;

 private:
  std::unique_ptr<ByteStream> stream_;
  std::string last_id_;
  bool done_ = false;
};

/// Every *.html / *.htm file below a directory, in sorted path order.
/// doc_id is the path relative to the directory, with '/' separators.
class DirectoryReader final : public RecordSource {
 public:
  explicit DirectoryReader(const std::filesystem::path& root);
  std::optional<CorpusRecord> next() override;

 private:
  std::filesystem::path root_;
  std::vector<std::filesystem::path> files_;
  std::size_t index_ = 0;
};

/// Directory → DirectoryReader, anything else → WarcReader.
/// Throws IngestError when the path does not exist.
std::unique_ptr<RecordSource> open_source(const std::filesystem::path& path);

}  // namespace htmlforge::corpus
