#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace htmlforge::cli {

/// Lowercase hex SHA-256 of `bytes`.
std::string sha256_hex(std::string_view bytes);

/// Record of one run. Holds no timestamps or host details, so identical
/// command, config, seed and inputs give an identical manifest.
struct RunManifest {
  std::string command;
  nlohmann::json config;  // resolved
  std::uint64_t seed = 0;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;  // file names inside the output directory
  std::map<std::string, std::int64_t> counters;

  /// Digest of config.dump(); object keys are sorted, so the dump is canonical.
  std::string config_hash() const;

  /// {"command","config","config_hash","seed","inputs","outputs":[{"path","sha256"}],
  ///  "counters"}. Output digests are read from `output_dir`.
  nlohmann::json to_json(const std::filesystem::path& output_dir) const;
};

}  // namespace htmlforge::cli
