#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ragsmith/corpus/history_store.hpp"
#include "ragsmith/corpus/types.hpp"

namespace ragsmith::corpus {

/// Path-pattern rules applied during ingestion. Patterns are fnmatch(3)
/// globs matched against the generic form of the path as given ('*' also
/// crosses '/'). Access groups are the union of every matching group rule;
/// the category is taken from the first matching category rule.
struct IngestRules {
  std::vector<std::pair<std::string, GroupSet>> group_patterns;
  std::vector<std::pair<std::string, Category>> category_patterns;

  GroupSet groups_for(const std::string& path) const;
  Category category_for(const std::string& path) const;

  /// Reads `pattern: group,group` lines.
  static std::vector<std::pair<std::string, GroupSet>> load_group_rules(const std::filesystem::path& file);
  /// Reads `pattern: Category` lines.
  static std::vector<std::pair<std::string, Category>> load_category_rules(const std::filesystem::path& file);
};

struct IngestStats {
  std::size_t docs_kept = 0;
  std::size_t docs_dropped = 0;
  std::map<Category, std::size_t> chunks_per_category;
  std::vector<std::pair<std::string, std::string>> errors;  // path, message

  std::size_t total_chunks() const;
  nlohmann::ordered_json to_json() const;
};

/// Stable document id derived from the source path.
std::string make_doc_id(const std::string& source_path);

/// Builds a Document from file contents. The title is the first non-blank
/// line, capped at 120 characters.
Document make_document(const std::string& source_path, std::string body,
                       const IngestRules& rules);

/// Owns corpus/docs.jsonl, corpus/chunks.jsonl and corpus/history.jsonl.
class CorpusStore {
 public:
  explicit CorpusStore(std::filesystem::path dir);

  /// Reads every regular file under `paths` (directories are walked in
  /// sorted order), drops bodies shorter than cfg.min_doc_chars, chunks the
  /// rest at full length and upserts them by doc_id. Unreadable files are
  /// recorded in IngestStats::errors and skipped.
  IngestStats ingest(std::span<const std::filesystem::path> paths, const IngestRules& rules,
                     const CorpusConfig& cfg);

  /// Upserts already-built documents (same filtering and chunking as ingest).
  IngestStats ingest_documents(std::vector<Document> docs, const CorpusConfig& cfg);

  std::vector<Document> documents() const;
  std::vector<Chunk> chunks() const;
  HistoryStore& history();

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path docs_path() const { return dir_ / "docs.jsonl"; }
  std::filesystem::path chunks_path() const { return dir_ / "chunks.jsonl"; }
  std::filesystem::path history_path() const { return dir_ / "history.jsonl"; }

 private:
  std::filesystem::path dir_;
  std::unique_ptr<HistoryStore> history_;
};

}  // namespace ragsmith::corpus
