#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace negdim::cli {

/// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

/// Everything needed to rerun a command: no timestamps or host data, so the
/// manifest itself is reproducible.
struct RunManifest {
  std::string command;
  nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
  nlohmann::ordered_json seed;  // null when the command is not random
  std::vector<std::filesystem::path> inputs;
  std::vector<std::filesystem::path> outputs;

  std::string to_json() const;
};

/// Writes `content` to `path` atomically, then `<path>.manifest.json`.
void write_with_manifest(const std::filesystem::path& path, const std::string& content,
                         const RunManifest& manifest);

}  // namespace negdim::cli
