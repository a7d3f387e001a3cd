#include "ragsmith/corpus/chunker.hpp"

#include <algorithm>
#include <cstdio>

#include "ragsmith/common/text.hpp"

namespace ragsmith::corpus {

std::vector<Document> filter_and_truncate(std::vector<Document> docs, const CorpusConfig& cfg) {
  cfg.validate();
  std::vector<Document> kept;
  kept.reserve(docs.size());
  for (auto& doc : docs) {
    const auto length = text::utf8_length(doc.body);
    if (length < cfg.min_doc_chars) {
      continue;
    }
    if (length > cfg.max_doc_chars) {
      doc.body = text::utf8_prefix(doc.body, cfg.max_doc_chars);
    }
    kept.push_back(std::move(doc));
  }
  return kept;
}

std::size_t expected_chunk_count(std::size_t length, const CorpusConfig& cfg) {
  if (length == 0) {
    return 0;
  }
  if (length <= cfg.chunk_size) {
    return 1;
  }
  const auto stride = cfg.stride();
  return (length - cfg.overlap + stride - 1) / stride;
}

std::string make_chunk_id(const std::string& doc_id, std::size_t seq) {
  char suffix[16];
  std::snprintf(suffix, sizeof(suffix), "#%05zu", seq);
  return doc_id + suffix;
}

std::vector<Chunk> chunk_document(const Document& doc, const CorpusConfig& cfg) {
  cfg.validate();
  if (doc.body.empty()) {
    throw ValidationError("empty document");
  }
  const auto bounds = text::utf8_boundaries(doc.body);
  const std::size_t length = bounds.size() - 1;
  const std::size_t count = expected_chunk_count(length, cfg);

  std::vector<Chunk> chunks;
  chunks.reserve(count);
  for (std::size_t seq = 0; seq < count; ++seq) {
    Chunk chunk;
    chunk.doc_id = doc.doc_id;
    chunk.chunk_id = make_chunk_id(doc.doc_id, seq);
    chunk.seq = seq;
    chunk.start = seq * cfg.stride();
    chunk.end = std::min(chunk.start + cfg.chunk_size, length);
    chunk.text = doc.body.substr(bounds[chunk.start], bounds[chunk.end] - bounds[chunk.start]);
    chunk.category = doc.category;
    chunk.access_groups = doc.access_groups;
    chunks.push_back(std::move(chunk));
  }
  return chunks;
}

}  // namespace ragsmith::corpus
