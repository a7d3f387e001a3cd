#include "ragsmith/corpus/history_store.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <mutex>

#include "ragsmith/common/jsonl.hpp"
#include "ragsmith/common/text.hpp"

namespace ragsmith::corpus {

namespace {

std::string make_entry_id(std::size_t seq) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "h%08zu", seq);
  return buf;
}

}  // namespace

std::string utc_timestamp_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

HistoryStore::HistoryStore(std::filesystem::path file) : file_(std::move(file)) {
  if (std::filesystem::exists(*file_)) {
    for (const auto& j : jsonl::read(*file_)) {
      entries_.push_back(history_from_json(j));
    }
    next_seq_ = entries_.size() + 1;
  }
}

std::string HistoryStore::append(HistoryEntry entry) {
  if (text::is_blank(entry.question)) {
    throw ValidationError("history entry requires a non-empty question");
  }
  if (entry.timestamp.empty()) {
    entry.timestamp = utc_timestamp_now();
  }
  std::unique_lock lock(mutex_);
  entry.entry_id = make_entry_id(next_seq_);
  if (file_) {
    jsonl::append(*file_, to_json(entry));
  }
  ++next_seq_;
  entries_.push_back(std::move(entry));
  return entries_.back().entry_id;
}

std::vector<HistoryEntry> HistoryStore::fetch(std::size_t limit) const {
  std::shared_lock lock(mutex_);
  const auto n = std::min(limit, entries_.size());
  return {entries_.end() - static_cast<std::ptrdiff_t>(n), entries_.end()};
}

std::vector<HistoryEntry> HistoryStore::all() const {
  std::shared_lock lock(mutex_);
  return entries_;
}

std::size_t HistoryStore::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

}  // namespace ragsmith::corpus
