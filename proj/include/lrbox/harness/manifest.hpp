#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include <json.hpp>

namespace lrbox {

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

/// ISO 8601 UTC timestamp with second resolution.
std::string utc_timestamp();

std::string tool_version();

/// Reproducibility record of one CLI run.
struct RunManifest {
  std::string subcommand;
  nlohmann::json config;
  std::string version = tool_version();
  std::string started;
  std::string finished;
  /// File name (relative to the output directory) to SHA-256.
  std::map<std::string, std::string> checksums;
  nlohmann::json summary = nlohmann::json::object();

  nlohmann::json to_json() const;
};

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);

}  // namespace lrbox
