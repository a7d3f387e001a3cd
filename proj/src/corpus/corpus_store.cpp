#include "ragsmith/corpus/corpus_store.hpp"

#include <fnmatch.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "ragsmith/common/jsonl.hpp"
#include "ragsmith/common/text.hpp"
#include "ragsmith/corpus/chunker.hpp"

namespace ragsmith::corpus {

namespace fs = std::filesystem;

namespace {

bool glob_matches(const std::string& pattern, const std::string& path) {
  return ::fnmatch(pattern.c_str(), path.c_str(), 0) == 0;
}

// `pattern: value` lines; '#' comments and blank lines skipped.
std::vector<std::pair<std::string, std::string>> read_rule_lines(const fs::path& file) {
  std::vector<std::pair<std::string, std::string>> rules;
  std::size_t line_no = 0;
  for (const auto& raw : text::split(jsonl::read_text(file), '\n')) {
    ++line_no;
    const auto line = text::trim(raw);
    if (line.empty() || line.front() == '#') {
      continue;
    }
    const auto colon = line.rfind(':');
    if (colon == std::string_view::npos) {
      throw std::runtime_error(file.string() + ":" + std::to_string(line_no) +
                               ": expected `pattern: value`");
    }
    rules.emplace_back(std::string(text::trim(line.substr(0, colon))),
                       std::string(text::trim(line.substr(colon + 1))));
  }
  return rules;
}

std::vector<fs::path> expand_paths(std::span<const fs::path> paths,
                                   std::vector<std::pair<std::string, std::string>>& errors) {
  std::vector<fs::path> files;
  for (const auto& p : paths) {
    std::error_code ec;
    if (fs::is_directory(p, ec)) {
      std::vector<fs::path> found;
      for (fs::recursive_directory_iterator it(p, ec), end; !ec && it != end; it.increment(ec)) {
        if (it->is_regular_file()) {
          found.push_back(it->path());
        }
      }
      if (ec) {
        errors.emplace_back(p.generic_string(), ec.message());
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.push_back(p);
    }
  }
  return files;
}

template <typename T, typename Fn>
std::vector<T> load_records(const fs::path& path, Fn&& parse) {
  std::vector<T> out;
  if (!fs::exists(path)) {
    return out;
  }
  for (const auto& j : jsonl::read(path)) {
    out.push_back(parse(j));
  }
  return out;
}

}  // namespace

GroupSet IngestRules::groups_for(const std::string& path) const {
  GroupSet groups;
  for (const auto& [pattern, g] : group_patterns) {
    if (glob_matches(pattern, path)) {
      groups.insert(g.begin(), g.end());
    }
  }
  return groups;
}

Category IngestRules::category_for(const std::string& path) const {
  for (const auto& [pattern, category] : category_patterns) {
    if (glob_matches(pattern, path)) {
      return category;
    }
  }
  return Category::Other;
}

std::vector<std::pair<std::string, GroupSet>> IngestRules::load_group_rules(const fs::path& file) {
  std::vector<std::pair<std::string, GroupSet>> rules;
  for (auto& [pattern, value] : read_rule_lines(file)) {
    GroupSet groups;
    for (const auto& g : text::split(value, ',')) {
      if (auto trimmed = text::trim(g); !trimmed.empty()) {
        groups.emplace(trimmed);
      }
    }
    rules.emplace_back(std::move(pattern), std::move(groups));
  }
  return rules;
}

std::vector<std::pair<std::string, Category>> IngestRules::load_category_rules(const fs::path& file) {
  std::vector<std::pair<std::string, Category>> rules;
  for (auto& [pattern, value] : read_rule_lines(file)) {
    auto category = parse_category(value);
    if (!category) {
      throw std::runtime_error(file.string() + ": unknown category `" + value + "`");
    }
    rules.emplace_back(std::move(pattern), *category);
  }
  return rules;
}

std::size_t IngestStats::total_chunks() const {
  std::size_t total = 0;
  for (const auto& [category, n] : chunks_per_category) {
    total += n;
  }
  return total;
}

nlohmann::ordered_json IngestStats::to_json() const {
  nlohmann::ordered_json per_category = nlohmann::ordered_json::object();
  for (const auto& [category, n] : chunks_per_category) {
    per_category[std::string(to_string(category))] = n;
  }
  nlohmann::ordered_json errs = nlohmann::ordered_json::array();
  for (const auto& [path, message] : errors) {
    errs.push_back({{"path", path}, {"error", message}});
  }
  return {{"docs_kept", docs_kept},
          {"docs_dropped", docs_dropped},
          {"chunks", total_chunks()},
          {"chunks_per_category", per_category},
          {"errors", errs}};
}

std::string make_doc_id(const std::string& source_path) {
  return "doc-" + text::hex64(text::fnv1a64(fs::path(source_path).lexically_normal().generic_string()));
}

Document make_document(const std::string& source_path, std::string body, const IngestRules& rules) {
  Document doc;
  doc.source_path = source_path;
  doc.doc_id = make_doc_id(source_path);
  doc.category = rules.category_for(source_path);
  doc.access_groups = rules.groups_for(source_path);
  for (const auto& line : text::split(body, '\n')) {
    if (auto trimmed = text::trim(line); !trimmed.empty()) {
      doc.title = text::utf8_prefix(trimmed, 120);
      break;
    }
  }
  if (doc.title.empty()) {
    doc.title = fs::path(source_path).stem().string();
  }
  doc.body = std::move(body);
  return doc;
}

CorpusStore::CorpusStore(fs::path dir) : dir_(std::move(dir)) {}

IngestStats CorpusStore::ingest(std::span<const fs::path> paths, const IngestRules& rules,
                                const CorpusConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> errors;
  std::vector<Document> docs;
  for (const auto& file : expand_paths(paths, errors)) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
      errors.emplace_back(file.generic_string(), "unreadable");
      continue;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    docs.push_back(make_document(file.generic_string(), ss.str(), rules));
  }
  auto stats = ingest_documents(std::move(docs), cfg);
  stats.errors.insert(stats.errors.begin(), errors.begin(), errors.end());
  return stats;
}

IngestStats CorpusStore::ingest_documents(std::vector<Document> docs, const CorpusConfig& cfg) {
  cfg.validate();
  IngestStats stats;

  std::map<std::string, Document> by_id;
  for (auto& doc : load_records<Document>(docs_path(), document_from_json)) {
    by_id.emplace(doc.doc_id, std::move(doc));
  }
  std::map<std::string, std::vector<Chunk>> chunks_by_doc;
  for (auto& chunk : load_records<Chunk>(chunks_path(), chunk_from_json)) {
    chunks_by_doc[chunk.doc_id].push_back(std::move(chunk));
  }

  for (auto& doc : docs) {
    if (text::utf8_length(doc.body) < cfg.min_doc_chars || doc.body.empty()) {
      ++stats.docs_dropped;
      continue;
    }
    auto chunks = chunk_document(doc, cfg);
    ++stats.docs_kept;
    stats.chunks_per_category[doc.category] += chunks.size();
    chunks_by_doc[doc.doc_id] = std::move(chunks);
    by_id[doc.doc_id] = std::move(doc);
  }

  std::vector<nlohmann::ordered_json> doc_records;
  std::vector<nlohmann::ordered_json> chunk_records;
  for (const auto& [id, doc] : by_id) {
    doc_records.push_back(to_json(doc));
    for (const auto& chunk : chunks_by_doc[id]) {
      chunk_records.push_back(to_json(chunk));
    }
  }
  jsonl::write(docs_path(), doc_records);
  jsonl::write(chunks_path(), chunk_records);
  return stats;
}

std::vector<Document> CorpusStore::documents() const {
  return load_records<Document>(docs_path(), document_from_json);
}

std::vector<Chunk> CorpusStore::chunks() const {
  return load_records<Chunk>(chunks_path(), chunk_from_json);
}

HistoryStore& CorpusStore::history() {
  if (!history_) {
    history_ = std::make_unique<HistoryStore>(history_path());
  }
  return *history_;
}

}  // namespace ragsmith::corpus
