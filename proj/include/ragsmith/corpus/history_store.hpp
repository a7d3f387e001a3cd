#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "ragsmith/corpus/types.hpp"

namespace ragsmith::corpus {

/// Append-only question/response log. Appends are serialized and, when the
/// store is file-backed, flushed to history.jsonl before returning. Readers
/// always see a consistent snapshot.
class HistoryStore {
 public:
  HistoryStore() = default;
  /// Loads existing entries from `file` (if present) and appends there.
  explicit HistoryStore(std::filesystem::path file);

  HistoryStore(const HistoryStore&) = delete;
  HistoryStore& operator=(const HistoryStore&) = delete;

  /// Assigns entry_id (and a timestamp when none is set). Throws
  /// ValidationError on an empty question. Returns the stored id.
  std::string append(HistoryEntry entry);

  /// The most recent `limit` entries, oldest first.
  std::vector<HistoryEntry> fetch(std::size_t limit) const;
  std::vector<HistoryEntry> all() const;
  std::size_t size() const;

 private:
  mutable std::shared_mutex mutex_;
  std::vector<HistoryEntry> entries_;
  std::size_t next_seq_ = 1;
  std::optional<std::filesystem::path> file_;
};

std::string utc_timestamp_now();

}  // namespace ragsmith::corpus
