#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace panos::io {

/// Keyed plain-text configuration: one `section.key = value` per line,
/// `#` comments. Unknown keys are rejected during validation so that
/// misconfigured experiments fail loudly, naming the offending key.
class Config {
 public:
  static Config parse_file(const std::filesystem::path& path);
  static Config parse_string(const std::string& text);

  /// Throws std::invalid_argument naming the first key not in `allowed`
  /// and not under any of `allowed_prefixes`.
  void validate_keys(const std::vector<std::string>& allowed,
                     const std::vector<std::string>& allowed_prefixes = {}) const;

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  std::vector<std::string> get_list(const std::string& key) const;
  std::vector<std::string> get_list(const std::string& key,
                                    const std::vector<std::string>& fallback) const;
  std::vector<double> get_double_list(const std::string& key,
                                      const std::vector<double>& fallback) const;

  /// Entries whose key starts with `prefix`, in key order.
  std::vector<std::pair<std::string, std::string>> with_prefix(const std::string& prefix) const;

  /// Hash of the canonical sorted key=value form.
  std::uint64_t canonical_hash() const;

  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

}  // namespace panos::io
