#include <zlib.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>

#include "htmlforge/corpus/ingest.h"
#include "htmlforge/util/error.h"

namespace htmlforge::corpus {

class WarcReader::ByteStream {
 public:
  virtual ~ByteStream() = default;

  // Returns the bytes up to and including the next '\n' (or the rest of
  // the stream). Empty means end of stream.
  std::string read_line() {
    std::string line;
    while (true) {
      if (pos_ == buf_.size() && !refill()) return line;
      const auto nl = std::find(buf_.begin() + static_cast<long>(pos_), buf_.end(), '\n');
      const auto stop = nl == buf_.end() ? buf_.end() : nl + 1;
      line.append(buf_.begin() + static_cast<long>(pos_), stop);
      pos_ = static_cast<std::size_t>(stop - buf_.begin());
      if (nl != buf_.end()) return line;
    }
  }

  // Reads up to n bytes; a short result means the stream ended.
  std::string read_exact(std::size_t n) {
    std::string out;
    out.reserve(n);
    while (out.size() < n) {
      if (pos_ == buf_.size() && !refill()) break;
      const std::size_t take = std::min(n - out.size(), buf_.size() - pos_);
      out.append(buf_, pos_, take);
      pos_ += take;
    }
    return out;
  }

 protected:
  // Fills `chunk` with the next bytes; returns 0 at end, throws on error.
  virtual std::size_t pull(char* chunk, std::size_t capacity) = 0;

 private:
  bool refill() {
    buf_.resize(1 << 16);
    const std::size_t got = pull(buf_.data(), buf_.size());
    buf_.resize(got);
    pos_ = 0;
    return got > 0;
  }

  std::string buf_;
  std::size_t pos_ = 0;
};

namespace {

class GzFileStream final : public WarcReader::ByteStream {
 public:
  explicit GzFileStream(const std::filesystem::path& path)
      : file_(gzopen(path.string().c_str(), "rb")) {
    if (file_ == nullptr) throw IngestError("", "cannot open " + path.string());
  }
  ~GzFileStream() override { gzclose(file_); }
  GzFileStream(const GzFileStream&) = delete;
  GzFileStream& operator=(const GzFileStream&) = delete;

 protected:
  std::size_t pull(char* chunk, std::size_t capacity) override {
    const int got = gzread(file_, chunk, static_cast<unsigned>(capacity));
    if (got < 0) {
      int errnum = 0;
      const char* msg = gzerror(file_, &errnum);
      // A cut-off gzip member reads as a short stream, not a hard failure.
      if (errnum == Z_BUF_ERROR) return 0;
      throw IngestError("", std::string("read failed: ") + msg);
    }
    return static_cast<std::size_t>(got);
  }

 private:
  gzFile file_;
};

class MemoryStream final : public WarcReader::ByteStream {
 public:
  explicit MemoryStream(std::string bytes) : bytes_(std::move(bytes)) {}

 protected:
  std::size_t pull(char* chunk, std::size_t capacity) override {
    const std::size_t take = std::min(capacity, bytes_.size() - pos_);
    std::copy_n(bytes_.data() + pos_, take, chunk);
    pos_ += take;
    return take;
  }

 private:
  std::string bytes_;
  std::size_t pos_ = 0;
};

// Inflates concatenated gzip members; a truncated member keeps what was
// decoded so the reader can report the short record.
std::string gunzip_all(const std::string& in) {
  std::string out;
  z_stream zs{};
  if (inflateInit2(&zs, 15 + 16) != Z_OK) throw IngestError("", "inflateInit failed");
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(in.data()));
  zs.avail_in = static_cast<uInt>(in.size());
  std::array<char, 1 << 15> chunk{};
  while (true) {
    zs.next_out = reinterpret_cast<Bytef*>(chunk.data());
    zs.avail_out = chunk.size();
    const int rc = inflate(&zs, Z_NO_FLUSH);
    out.append(chunk.data(), chunk.size() - zs.avail_out);
    if (rc == Z_STREAM_END) {
      if (zs.avail_in == 0) break;
      inflateReset(&zs);
      continue;
    }
    if (rc != Z_OK) break;
    if (zs.avail_in == 0 && zs.avail_out != 0) break;
  }
  inflateEnd(&zs);
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string lowercase(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

using Headers = std::vector<std::pair<std::string, std::string>>;

const std::string* find_header(const Headers& headers, std::string_view name) {
  for (const auto& [key, value] : headers) {
    if (key == name) return &value;
  }
  return nullptr;
}

void parse_header_line(std::string_view line, Headers& out) {
  const std::size_t colon = line.find(':');
  if (colon == std::string_view::npos) return;
  out.emplace_back(lowercase(trim(line.substr(0, colon))),
                   trim(line.substr(colon + 1)));
}

bool is_html_mime(const std::string* content_type) {
  if (content_type == nullptr) return false;
  std::string mime = lowercase(*content_type);
  mime = trim(mime.substr(0, mime.find(';')));
  return mime == "text/html" || mime == "application/xhtml+xml";
}

std::string dechunk(std::string_view body) {
  std::string out;
  std::size_t pos = 0;
  while (pos < body.size()) {
    const std::size_t eol = body.find('\n', pos);
    if (eol == std::string_view::npos) break;
    const std::string size_text = trim(body.substr(pos, eol - pos));
    std::size_t size = 0;
    const auto hex_end = size_text.find(';');
    const std::string_view digits = std::string_view(size_text).substr(0, hex_end);
    auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), size, 16);
    if (ec != std::errc{} || size == 0) break;
    pos = eol + 1;
    out.append(body.substr(pos, std::min(size, body.size() - pos)));
    pos += size;
    while (pos < body.size() && (body[pos] == '\r' || body[pos] == '\n')) ++pos;
  }
  return out;
}

}  // namespace

std::unique_ptr<WarcReader> WarcReader::open(const std::filesystem::path& path) {
  return std::make_unique<WarcReader>(std::make_unique<GzFileStream>(path));
}

std::unique_ptr<WarcReader> WarcReader::from_bytes(std::string bytes) {
  if (bytes.size() >= 2 && static_cast<unsigned char>(bytes[0]) == 0x1f &&
      static_cast<unsigned char>(bytes[1]) == 0x8b) {
    bytes = gunzip_all(bytes);
  }
  return std::make_unique<WarcReader>(std::make_unique<MemoryStream>(std::move(bytes)));
}

WarcReader::WarcReader(std::unique_ptr<ByteStream> stream) : stream_(std::move(stream)) {}
WarcReader::~WarcReader() = default;

std::optional<CorpusRecord> WarcReader::next() {
  while (!done_) {
    std::string version;
    try {
      do {
        version = stream_->read_line();
      } while (!version.empty() && trim(version).empty());
      if (version.empty()) {
        done_ = true;
        return std::nullopt;
      }
      if (!trim(version).starts_with("WARC/")) {
        ++counters_.warnings;
        done_ = true;
        return std::nullopt;
      }

      Headers headers;
      bool header_done = false;
      while (true) {
        std::string line = stream_->read_line();
        if (line.empty()) break;
        if (trim(line).empty()) {
          header_done = true;
          break;
        }
        parse_header_line(line, headers);
      }
      const std::string* id = find_header(headers, "warc-record-id");
      last_id_ = id ? *id : std::string();
      const std::string* length_text = find_header(headers, "content-length");
      std::size_t length = 0;
      if (!header_done || length_text == nullptr ||
          std::from_chars(length_text->data(), length_text->data() + length_text->size(), length)
                  .ec != std::errc{}) {
        ++counters_.warnings;
        done_ = true;
        return std::nullopt;
      }
      std::string block = stream_->read_exact(length);
      if (block.size() < length) {
        ++counters_.warnings;
        done_ = true;
        return std::nullopt;
      }
      ++counters_.records_read;

      const std::string* type = find_header(headers, "warc-type");
      if (type == nullptr || lowercase(*type) != "response") {
        ++counters_.skipped;
        continue;
      }
      std::size_t body_at = block.find("\r\n\r\n");
      std::size_t sep = 4;
      if (body_at == std::string::npos) {
        body_at = block.find("\n\n");
        sep = 2;
      }
      if (!block.starts_with("HTTP/") || body_at == std::string::npos) {
        ++counters_.skipped;
        continue;
      }
      Headers http;
      std::string_view head(block.data(), body_at);
      std::size_t line_start = head.find('\n');
      while (line_start != std::string_view::npos) {
        const std::size_t line_end = head.find('\n', line_start + 1);
        parse_header_line(head.substr(line_start + 1, line_end == std::string_view::npos
                                                           ? std::string_view::npos
                                                           : line_end - line_start - 1),
                          http);
        line_start = line_end;
      }
      if (!is_html_mime(find_header(http, "content-type"))) {
        ++counters_.skipped;
        continue;
      }
      std::string body = block.substr(body_at + sep);
      if (const std::string* te = find_header(http, "transfer-encoding");
          te && lowercase(*te).find("chunked") != std::string::npos) {
        body = dechunk(body);
      }
      CorpusRecord rec;
      rec.doc_id = last_id_;
      if (const std::string* uri = find_header(headers, "warc-target-uri")) rec.url = *uri;
      rec.html = std::move(body);
      ++counters_.html_records;
      return rec;
    } catch (const IngestError& e) {
      throw IngestError(last_id_, e.what());
    }
  }
  return std::nullopt;
}

}  // namespace htmlforge::corpus
