#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

namespace ragsmith::jsonl {

/// Parses one JSON value per non-blank line. Throws std::runtime_error naming
/// the file and line on malformed input.
std::vector<nlohmann::json> read(const std::filesystem::path& path);

/// Writes one compact JSON object per line (UTF-8, '\n' terminated) through a
/// temporary file renamed into place. Creates parent directories.
void write(const std::filesystem::path& path, const std::vector<nlohmann::ordered_json>& records);

/// Appends a single record and flushes.
void append(const std::filesystem::path& path, const nlohmann::ordered_json& record);

/// Writes `contents` to `path` through a temporary file.
void write_text_atomically(const std::filesystem::path& path, const std::string& contents);

std::string read_text(const std::filesystem::path& path);

}  // namespace ragsmith::jsonl
