#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ragsmith/corpus/types.hpp"
#include "ragsmith/gateway/gateway_types.hpp"
#include "ragsmith/retrieval/access_filter.hpp"
#include "ragsmith/retrieval/bm25.hpp"

namespace ragsmith::retrieval {

struct ScoredChunk {
  std::uint32_t ordinal;
  std::string chunk_id;
  double score;
};

/// Immutable snapshot holding the chunk table, the lexical index and the
/// vector table. Chunks are stored sorted by chunk_id, so ordinal order is
/// chunk_id order and every tie-break below is "chunk_id ascending".
///
/// On disk (directory `index/`):
///   lexical.bin  "RSLX" + version byte, chunk table, postings
///   vectors.bin  "RSVX" + version byte, count, dimension, float32 rows
class ChunkIndex {
 public:
  static constexpr std::uint8_t kFormatVersion = 1;

  /// Embeds every chunk text and indexes it. Throws on duplicate chunk ids.
  static std::shared_ptr<const ChunkIndex> build(std::vector<corpus::Chunk> chunks,
                                                 gateway::Embedder& embedder,
                                                 std::size_t embed_batch = 64);
  static std::shared_ptr<const ChunkIndex> load(const std::filesystem::path& dir);
  void save(const std::filesystem::path& dir) const;

  /// Authorized chunks with positive BM25 score, best first.
  std::vector<ScoredChunk> bm25_search(std::string_view query, const AccessFilter& filter,
                                       std::size_t depth, const Bm25Params& params = {}) const;

  /// Authorized chunks by cosine similarity (dot product of unit vectors),
  /// best first. Throws std::invalid_argument on a dimension mismatch.
  std::vector<ScoredChunk> vector_search(std::span<const float> query, const AccessFilter& filter,
                                         std::size_t depth) const;

  const corpus::Chunk* find(std::string_view chunk_id) const;
  const corpus::Chunk& chunk(std::uint32_t ordinal) const { return chunks_[ordinal]; }
  std::span<const float> vector(std::uint32_t ordinal) const;
  std::size_t size() const { return chunks_.size(); }
  std::size_t dimension() const { return dimension_; }
  std::span<const corpus::Chunk> chunks() const { return chunks_; }

  ChunkIndex(const ChunkIndex&) = delete;
  ChunkIndex& operator=(const ChunkIndex&) = delete;

 private:
  ChunkIndex() = default;
  void finish();

  // Authorization is decided once per distinct access-group set.
  struct AclClass {
    corpus::GroupSet groups;
    std::size_t doc_count = 0;
    double total_length = 0.0;
  };
  std::vector<bool> authorized_classes(const AccessFilter& filter) const;

  std::vector<corpus::Chunk> chunks_;
  std::unordered_map<std::string, std::uint32_t> by_id_;
  std::vector<std::uint32_t> class_of_;
  std::vector<AclClass> classes_;
  Bm25Index lexical_;
  std::vector<float> vectors_;
  std::size_t dimension_ = 0;
};

}  // namespace ragsmith::retrieval
