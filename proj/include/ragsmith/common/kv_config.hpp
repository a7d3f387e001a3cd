#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

namespace ragsmith {

/// Plain-text `key = value` configuration. Blank lines and lines starting
/// with '#' are ignored; later keys override earlier ones.
class KeyValueConfig {
 public:
  KeyValueConfig() = default;

  static KeyValueConfig parse(std::string_view contents);
  static KeyValueConfig load(const std::filesystem::path& path);

  void set(std::string key, std::string value);
  std::optional<std::string> get(const std::string& key) const;
  std::string get_or(const std::string& key, std::string fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
  bool contains(const std::string& key) const { return values_.count(key) > 0; }

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace ragsmith
