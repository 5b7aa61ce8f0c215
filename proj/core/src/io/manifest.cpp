#include "panos/io/manifest.hpp"

#include <cstdlib>
#include <ctime>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace panos::io {

namespace {

std::string timestamp_utc() {
  std::time_t t;
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH")) {
    t = static_cast<std::time_t>(std::strtoll(env, nullptr, 10));
  } else {
    t = std::time(nullptr);
  }
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

void write_manifest(const Manifest& m, const std::filesystem::path& path) {
  nlohmann::json j{{"tool_version", kToolVersion},
                   {"command", m.command},
                   {"config_hash", m.config_hash},
                   {"seeds", m.seeds},
                   {"inputs", m.inputs},
                   {"outputs", m.outputs},
                   {"timestamp", timestamp_utc()}};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open manifest for writing: " + path.string());
  out << j.dump(2) << "\n";
  if (!out) throw std::runtime_error("manifest write failed: " + path.string());
}

}  // namespace panos::io
