#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace htmlforge {

/// Base class for every error the toolkit raises on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input bytes are not well-formed UTF-8.
class Utf8Error : public Error {
 public:
  Utf8Error(std::string message, std::size_t offset)
      : Error(std::move(message)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// A configuration value is missing or out of range. `field` names the
/// offending key so callers can report it.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// A data-ref anchor did not resolve to an element.
class RetrieverError : public Error {
 public:
  using Error::Error;
};

/// No planning rule accepted an instruction.
class PlanError : public Error {
 public:
  using Error::Error;
};

/// Reading a corpus source failed. `record_id` is the record being read
/// when the failure happened (may be empty before the first record).
class IngestError : public Error {
 public:
  IngestError(std::string record_id, const std::string& message)
      : Error(record_id.empty() ? message : record_id + ": " + message),
        record_id_(std::move(record_id)) {}
  const std::string& record_id() const noexcept { return record_id_; }

 private:
  std::string record_id_;
};

}  // namespace htmlforge
