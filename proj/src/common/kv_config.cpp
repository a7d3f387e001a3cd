#include "ragsmith/common/kv_config.hpp"

#include <stdexcept>

#include "ragsmith/common/jsonl.hpp"
#include "ragsmith/common/text.hpp"

namespace ragsmith {

KeyValueConfig KeyValueConfig::parse(std::string_view contents) {
  KeyValueConfig config;
  std::size_t line_no = 0;
  for (const auto& raw : text::split(contents, '\n')) {
    ++line_no;
    const auto line = text::trim(raw);
    if (line.empty() || line.front() == '#') {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw std::runtime_error("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const auto key = text::trim(line.substr(0, eq));
    if (key.empty()) {
      throw std::runtime_error("config line " + std::to_string(line_no) + ": empty key");
    }
    config.set(std::string(key), std::string(text::trim(line.substr(eq + 1))));
  }
  return config;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  return parse(jsonl::read_text(path));
}

void KeyValueConfig::set(std::string key, std::string value) {
  values_[std::move(key)] = std::move(value);
}

std::optional<std::string> KeyValueConfig::get(const std::string& key) const {
  if (auto it = values_.find(key); it != values_.end()) {
    return it->second;
  }
  return std::nullopt;
}

std::string KeyValueConfig::get_or(const std::string& key, std::string fallback) const {
  auto v = get(key);
  return v ? *v : std::move(fallback);
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
  auto v = get(key);
  if (!v) {
    return fallback;
  }
  try {
    return std::stod(*v);
  } catch (const std::exception&) {
    throw std::runtime_error("config key " + key + ": not a number: " + *v);
  }
}

long long KeyValueConfig::get_int(const std::string& key, long long fallback) const {
  auto v = get(key);
  if (!v) {
    return fallback;
  }
  try {
    std::size_t used = 0;
    const long long parsed = std::stoll(*v, &used);
    if (used != v->size()) {
      throw std::invalid_argument(*v);
    }
    return parsed;
  } catch (const std::exception&) {
    throw std::runtime_error("config key " + key + ": not an integer: " + *v);
  }
}

}  // namespace ragsmith
