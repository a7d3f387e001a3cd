#pragma once

#include <cstddef>
#include <memory>
#include <mutex>
#include <string_view>

#include "ragsmith/gateway/gateway_types.hpp"
#include "ragsmith/retrieval/access_filter.hpp"
#include "ragsmith/retrieval/chunk_index.hpp"
#include "ragsmith/retrieval/rrf.hpp"

namespace ragsmith::retrieval {

struct RetrievalConfig {
  std::size_t top_n = 10;
  double rrf_k = 60.0;
  std::size_t candidate_depth = 100;
  double bm25_k1 = 1.2;
  double bm25_b = 0.75;

  void validate() const;
  Bm25Params bm25() const { return {bm25_k1, bm25_b}; }
};

/// Filtered BM25 + vector search fused with RRF over an index snapshot that
/// can be swapped atomically while searches are running.
class HybridRetriever {
 public:
  HybridRetriever(std::shared_ptr<const ChunkIndex> index, std::shared_ptr<gateway::Embedder> embedder);

  /// rrf_fuse([bm25, vector], rrf_k, top_n). If embedding the query fails
  /// the result is lexical-only with `degraded` set. A blank query yields an
  /// empty result.
  RetrievalResult search(std::string_view query, const AccessFilter& filter,
                         const RetrievalConfig& cfg) const;

  /// Same as search() but pinned to the given snapshot.
  RetrievalResult search_in(const ChunkIndex& index, std::string_view query,
                            const AccessFilter& filter, const RetrievalConfig& cfg) const;

  std::shared_ptr<const ChunkIndex> snapshot() const;
  void swap_index(std::shared_ptr<const ChunkIndex> index);

 private:
  mutable std::mutex mutex_;
  std::shared_ptr<const ChunkIndex> index_;
  std::shared_ptr<gateway::Embedder> embedder_;
};

}  // namespace ragsmith::retrieval
