#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace panos::io {

constexpr const char* kToolVersion = "0.1.0";

/// Provenance record written next to every command's outputs. The timestamp
/// honors SOURCE_DATE_EPOCH so reruns can be byte-identical.
struct Manifest {
  std::string command;
  std::uint64_t config_hash = 0;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
};

void write_manifest(const Manifest& m, const std::filesystem::path& path);

}  // namespace panos::io
