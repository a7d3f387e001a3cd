#include "ragsmith/retrieval/hybrid_retriever.hpp"

#include <spdlog/spdlog.h>

#include <stdexcept>
#include <string>
#include <vector>

#include "ragsmith/common/text.hpp"

namespace ragsmith::retrieval {

void RetrievalConfig::validate() const {
  if (top_n > candidate_depth) {
    throw std::invalid_argument("retrieval config: top_n must not exceed candidate_depth");
  }
  if (!(rrf_k > 0.0) || !(bm25_k1 > 0.0) || bm25_b < 0.0 || bm25_b > 1.0) {
    throw std::invalid_argument("retrieval config: need rrf_k > 0, k1 > 0 and b in [0, 1]");
  }
}

HybridRetriever::HybridRetriever(std::shared_ptr<const ChunkIndex> index,
                                 std::shared_ptr<gateway::Embedder> embedder)
    : index_(std::move(index)), embedder_(std::move(embedder)) {
  if (!index_ || !embedder_) {
    throw std::invalid_argument("hybrid retriever needs an index and an embedder");
  }
}

std::shared_ptr<const ChunkIndex> HybridRetriever::snapshot() const {
  std::lock_guard lock(mutex_);
  return index_;
}

void HybridRetriever::swap_index(std::shared_ptr<const ChunkIndex> index) {
  if (!index) {
    throw std::invalid_argument("swap_index: null index");
  }
  std::lock_guard lock(mutex_);
  index_ = std::move(index);
}

RetrievalResult HybridRetriever::search(std::string_view query, const AccessFilter& filter,
                                        const RetrievalConfig& cfg) const {
  const auto index = snapshot();
  return search_in(*index, query, filter, cfg);
}

RetrievalResult HybridRetriever::search_in(const ChunkIndex& index, std::string_view query,
                                           const AccessFilter& filter, const RetrievalConfig& cfg) const {
  cfg.validate();
  if (text::is_blank(query)) {
    return {};
  }
  std::vector<std::vector<std::string>> rankings(2);
  for (const auto& hit : index.bm25_search(query, filter, cfg.candidate_depth, cfg.bm25())) {
    rankings[0].push_back(hit.chunk_id);
  }

  std::string degraded_reason;
  try {
    const std::vector<std::string> q{std::string(query)};
    const auto embedded = embedder_->embed(q);
    if (embedded.size() != 1) {
      throw std::runtime_error("embedder returned no vector for the query");
    }
    for (const auto& hit : index.vector_search(embedded.front(), filter, cfg.candidate_depth)) {
      rankings[1].push_back(hit.chunk_id);
    }
  } catch (const std::exception& e) {
    degraded_reason = e.what();
    rankings[1].clear();
    spdlog::warn("query embedding failed, using lexical results only: {}", degraded_reason);
  }

  auto result = rrf_fuse(rankings, cfg.rrf_k, cfg.top_n);
  if (!degraded_reason.empty()) {
    result.degraded = true;
    result.degraded_reason = std::move(degraded_reason);
  }
  return result;
}

}  // namespace ragsmith::retrieval
