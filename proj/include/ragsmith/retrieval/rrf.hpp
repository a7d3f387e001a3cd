#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ragsmith::retrieval {

struct FusedEntry {
  std::string chunk_id;
  double fused_score = 0.0;
  /// 1-based rank of the id in each input list, absent where it did not
  /// appear. For hybrid search list 0 is lexical and list 1 semantic.
  std::vector<std::optional<std::size_t>> ranks;

  std::optional<std::size_t> lex_rank() const { return ranks.empty() ? std::nullopt : ranks[0]; }
  std::optional<std::size_t> sem_rank() const { return ranks.size() < 2 ? std::nullopt : ranks[1]; }
};

struct RetrievalResult {
  std::vector<FusedEntry> entries;
  bool degraded = false;  // lexical-only because embedding failed
  std::string degraded_reason;
};

/// Reciprocal Rank Fusion: fused(id) = sum over lists containing id of
/// 1 / (k + rank). Sorted by fused score descending, ties by id ascending,
/// truncated to top_n. Each list must hold unique ids.
RetrievalResult rrf_fuse(std::span<const std::vector<std::string>> rankings, double k, std::size_t top_n);

}  // namespace ragsmith::retrieval
