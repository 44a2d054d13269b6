#pragma once

#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace gramentropy::cli {

using json = nlohmann::ordered_json;

/// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

/// Provenance block embedded in every JSON document the tool prints.
class RunManifest {
public:
  explicit RunManifest(std::string command);

  void set_config(json config) { config_ = std::move(config); }
  void set_seed(std::uint64_t seed) { seed_ = seed; }
  void add_input(const std::filesystem::path& path);

  [[nodiscard]] json to_json() const;

private:
  std::string command_;
  json config_ = json::object();
  std::vector<std::pair<std::string, std::string>> inputs_;
  std::uint64_t seed_ = 0;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace gramentropy::cli
