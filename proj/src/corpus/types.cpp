#include "ragsmith/corpus/types.hpp"

#include <array>
#include <utility>

#include "ragsmith/common/text.hpp"

namespace ragsmith::corpus {

namespace {

constexpr std::array<std::pair<Category, std::string_view>, 6> kCategoryNames{{
    {Category::ParameterReference, "ParameterReference"},
    {Category::Timing, "Timing"},
    {Category::DevOps, "DevOps"},
    {Category::DesignGuide, "DesignGuide"},
    {Category::CommandReference, "CommandReference"},
    {Category::Other, "Other"},
}};

GroupSet groups_from_json(const nlohmann::json& j) {
  GroupSet groups;
  for (const auto& g : j) {
    groups.insert(g.get<std::string>());
  }
  return groups;
}

}  // namespace

std::string_view to_string(Category category) {
  for (const auto& [value, name] : kCategoryNames) {
    if (value == category) {
      return name;
    }
  }
  return "Other";
}

std::optional<Category> parse_category(std::string_view name) {
  const auto wanted = text::to_lower(text::trim(name));
  for (const auto& [value, canonical] : kCategoryNames) {
    if (text::to_lower(canonical) == wanted) {
      return value;
    }
  }
  return std::nullopt;
}

Category category_from_json(const nlohmann::json& value) {
  const auto name = value.get<std::string>();
  if (auto parsed = parse_category(name)) {
    return *parsed;
  }
  throw std::runtime_error("unknown category: " + name);
}

void CorpusConfig::validate() const {
  if (chunk_size == 0 || overlap >= chunk_size) {
    throw std::invalid_argument("corpus config: require 0 <= overlap < chunk_size");
  }
  if (min_doc_chars > max_doc_chars) {
    throw std::invalid_argument("corpus config: require min_doc_chars <= max_doc_chars");
  }
}

nlohmann::ordered_json to_json(const Document& doc) {
  return {{"doc_id", doc.doc_id},
          {"title", doc.title},
          {"body", doc.body},
          {"category", to_string(doc.category)},
          {"access_groups", doc.access_groups},
          {"source_path", doc.source_path}};
}

nlohmann::ordered_json to_json(const Chunk& chunk) {
  return {{"chunk_id", chunk.chunk_id},
          {"doc_id", chunk.doc_id},
          {"seq", chunk.seq},
          {"start", chunk.start},
          {"end", chunk.end},
          {"text", chunk.text},
          {"category", to_string(chunk.category)},
          {"access_groups", chunk.access_groups}};
}

nlohmann::ordered_json to_json(const HistoryEntry& entry) {
  nlohmann::ordered_json j{{"entry_id", entry.entry_id},
                           {"question", entry.question},
                           {"response", entry.response},
                           {"timestamp", entry.timestamp}};
  j["user_id"] = entry.user_id ? nlohmann::ordered_json(*entry.user_id) : nlohmann::ordered_json();
  return j;
}

Document document_from_json(const nlohmann::json& j) {
  Document doc;
  doc.doc_id = j.at("doc_id").get<std::string>();
  doc.title = j.value("title", "");
  doc.body = j.at("body").get<std::string>();
  doc.category = category_from_json(j.at("category"));
  doc.access_groups = groups_from_json(j.at("access_groups"));
  doc.source_path = j.value("source_path", "");
  return doc;
}

Chunk chunk_from_json(const nlohmann::json& j) {
  Chunk chunk;
  chunk.chunk_id = j.at("chunk_id").get<std::string>();
  chunk.doc_id = j.at("doc_id").get<std::string>();
  chunk.seq = j.at("seq").get<std::size_t>();
  chunk.start = j.at("start").get<std::size_t>();
  chunk.end = j.at("end").get<std::size_t>();
  chunk.text = j.at("text").get<std::string>();
  chunk.category = category_from_json(j.at("category"));
  chunk.access_groups = groups_from_json(j.at("access_groups"));
  return chunk;
}

HistoryEntry history_from_json(const nlohmann::json& j) {
  HistoryEntry entry;
  entry.entry_id = j.at("entry_id").get<std::string>();
  entry.question = j.at("question").get<std::string>();
  entry.response = j.value("response", "");
  entry.timestamp = j.value("timestamp", "");
  if (j.contains("user_id") && !j.at("user_id").is_null()) {
    entry.user_id = j.at("user_id").get<std::string>();
  }
  return entry;
}

}  // namespace ragsmith::corpus
