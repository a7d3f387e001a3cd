#pragma once

#include <cstddef>
#include <vector>

#include "ragsmith/corpus/types.hpp"

namespace ragsmith::corpus {

/// Drops documents shorter than cfg.min_doc_chars and cuts longer bodies to
/// their first cfg.max_doc_chars characters. Input order is preserved.
std::vector<Document> filter_and_truncate(std::vector<Document> docs, const CorpusConfig& cfg);

/// Number of chunks a body of `length` characters produces.
std::size_t expected_chunk_count(std::size_t length, const CorpusConfig& cfg);

/// Fixed-stride character windows: chunk i covers
/// [i * stride, min(i * stride + chunk_size, length)). The final window may be
/// shorter and is kept as is. Throws ValidationError("empty document").
std::vector<Chunk> chunk_document(const Document& doc, const CorpusConfig& cfg);

std::string make_chunk_id(const std::string& doc_id, std::size_t seq);

}  // namespace ragsmith::corpus
