#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace rfdeauth::cli {

// Provenance record written next to every subcommand's outputs.
struct RunManifest {
  std::string subcommand;
  std::string config;  // path, or "reference" for the built-in defaults
  std::uint64_t seed{0};
  std::vector<std::pair<std::string, std::string>> inputs;  // role -> path
  std::vector<std::string> outputs;                         // file names inside the output directory
  std::vector<std::pair<std::string, std::string>> parameters;
};

// UTC time from SOURCE_DATE_EPOCH, or the epoch itself when unset so that
// re-runs stay byte-identical.
std::string manifest_timestamp();

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);

}  // namespace rfdeauth::cli
