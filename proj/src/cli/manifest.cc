#include "htmlforge/cli/manifest.h"

#include <openssl/evp.h>

#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace htmlforge::cli {

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xF]);
  }
  return out;
}

std::string RunManifest::config_hash() const { return sha256_hex(config.dump()); }

nlohmann::json RunManifest::to_json(const std::filesystem::path& output_dir) const {
  nlohmann::json outs = nlohmann::json::array();
  for (const auto& name : outputs) {
    std::ifstream in(output_dir / name, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read output " + (output_dir / name).string());
    std::ostringstream ss;
    ss << in.rdbuf();
    outs.push_back({{"path", name}, {"sha256", sha256_hex(ss.str())}});
  }
  return {{"command", command},
          {"config", config},
          {"config_hash", config_hash()},
          {"seed", seed},
          {"inputs", inputs},
          {"outputs", std::move(outs)},
          {"counters", counters}};
}

}  // namespace htmlforge::cli
