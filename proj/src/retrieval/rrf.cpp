#include "ragsmith/retrieval/rrf.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace ragsmith::retrieval {

RetrievalResult rrf_fuse(std::span<const std::vector<std::string>> rankings, double k, std::size_t top_n) {
  if (!(k > 0.0)) {
    throw std::invalid_argument("rrf_fuse: k must be positive");
  }
  std::unordered_map<std::string, std::size_t> slot;
  RetrievalResult result;
  for (std::size_t list = 0; list < rankings.size(); ++list) {
    const auto& ids = rankings[list];
    for (std::size_t pos = 0; pos < ids.size(); ++pos) {
      auto [it, inserted] = slot.try_emplace(ids[pos], result.entries.size());
      if (inserted) {
        FusedEntry e;
        e.chunk_id = ids[pos];
        e.ranks.assign(rankings.size(), std::nullopt);
        result.entries.push_back(std::move(e));
      }
      auto& entry = result.entries[it->second];
      if (entry.ranks[list]) {
        throw std::invalid_argument("rrf_fuse: duplicate id `" + ids[pos] + "` within one ranking");
      }
      entry.ranks[list] = pos + 1;
    }
  }
  // Summed in list order so equal rank profiles give bit-identical scores.
  for (auto& entry : result.entries) {
    for (const auto& rank : entry.ranks) {
      if (rank) {
        entry.fused_score += 1.0 / (k + static_cast<double>(*rank));
      }
    }
  }
  std::sort(result.entries.begin(), result.entries.end(), [](const FusedEntry& a, const FusedEntry& b) {
    return a.fused_score != b.fused_score ? a.fused_score > b.fused_score : a.chunk_id < b.chunk_id;
  });
  if (result.entries.size() > top_n) {
    result.entries.resize(top_n);
  }
  return result;
}

}  // namespace ragsmith::retrieval
