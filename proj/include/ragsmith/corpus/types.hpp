#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

#include "json.hpp"

namespace ragsmith::corpus {

enum class Category {
  ParameterReference,
  Timing,
  DevOps,
  DesignGuide,
  CommandReference,
  Other,
};

std::string_view to_string(Category category);
/// Accepts the canonical names above (case-insensitive).
std::optional<Category> parse_category(std::string_view name);
Category category_from_json(const nlohmann::json& value);

/// Empty set means the document is public.
using GroupSet = std::set<std::string>;

struct Document {
  std::string doc_id;
  std::string title;
  std::string body;
  Category category = Category::Other;
  GroupSet access_groups;
  std::string source_path;

  bool operator==(const Document&) const = default;
};

/// `start` and `end` are character offsets into the parent body.
struct Chunk {
  std::string chunk_id;
  std::string doc_id;
  std::size_t seq = 0;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string text;
  Category category = Category::Other;
  GroupSet access_groups;

  bool operator==(const Chunk&) const = default;
};

struct HistoryEntry {
  std::string entry_id;
  std::string question;
  std::string response;
  std::string timestamp;  // ISO-8601 UTC
  std::optional<std::string> user_id;

  bool operator==(const HistoryEntry&) const = default;
};

struct CorpusConfig {
  std::size_t chunk_size = 2000;
  std::size_t overlap = 200;
  std::size_t min_doc_chars = 1000;
  std::size_t max_doc_chars = 10000;

  /// Throws std::invalid_argument when overlap >= chunk_size or
  /// min_doc_chars > max_doc_chars.
  void validate() const;
  std::size_t stride() const { return chunk_size - overlap; }
};

class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

nlohmann::ordered_json to_json(const Document& doc);
nlohmann::ordered_json to_json(const Chunk& chunk);
nlohmann::ordered_json to_json(const HistoryEntry& entry);
Document document_from_json(const nlohmann::json& j);
Chunk chunk_from_json(const nlohmann::json& j);
HistoryEntry history_from_json(const nlohmann::json& j);

}  // namespace ragsmith::corpus
