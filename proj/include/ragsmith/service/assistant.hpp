#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "ragsmith/corpus/history_store.hpp"
#include "ragsmith/corpus/types.hpp"
#include "ragsmith/gateway/gateway_types.hpp"
#include "ragsmith/prompts/templates.hpp"
#include "ragsmith/retrieval/hybrid_retriever.hpp"
#include "ragsmith/service/user_directory.hpp"

namespace ragsmith::service {

struct ProvenanceItem {
  std::string chunk_id;
  std::string doc_id;
  std::string title;
  corpus::Category category = corpus::Category::Other;
  corpus::GroupSet access_groups;
  double fused_score = 0.0;
};

struct QueryResponse {
  std::string answer;
  std::vector<ProvenanceItem> provenance;  // exactly the passages in the prompt, in order
  bool degraded = false;
  std::string degraded_reason;
  double timing_ms = 0.0;
  std::optional<std::string> error;  // set when generation failed

  nlohmann::ordered_json to_json() const;
};

struct AssistantOptions {
  retrieval::RetrievalConfig retrieval;
  std::size_t max_prompt_chars = 32000;
  std::size_t max_tokens = 1024;
};

/// Query handling: user -> groups -> filtered hybrid retrieval -> RAFT
/// prompt -> generation -> history. Safe to call from many threads.
class AssistantService {
 public:
  AssistantService(std::shared_ptr<retrieval::HybridRetriever> retriever,
                   std::shared_ptr<gateway::TextGenerator> generator, UserDirectory users,
                   corpus::HistoryStore& history, prompts::PromptTemplates templates,
                   std::span<const corpus::Document> documents, AssistantOptions options = {});

  /// Throws corpus::ValidationError on a blank question or top_n == 0.
  /// Generation failures are reported through QueryResponse::error, with the
  /// provenance still filled in and no history entry written.
  QueryResponse handle_query(std::string_view user_id, std::string_view question,
                             std::optional<std::size_t> top_n = std::nullopt);

  /// Document and chunk counts, per category and overall.
  nlohmann::ordered_json corpus_stats() const;

  corpus::HistoryStore& history() { return history_; }
  const UserDirectory& users() const { return users_; }
  /// The most recent prompt sent to the generator (for diagnostics).
  std::string last_prompt() const;

 private:
  std::shared_ptr<retrieval::HybridRetriever> retriever_;
  std::shared_ptr<gateway::TextGenerator> generator_;
  UserDirectory users_;
  corpus::HistoryStore& history_;
  prompts::PromptTemplates templates_;
  AssistantOptions options_;
  std::unordered_map<std::string, std::string> titles_;
  std::map<corpus::Category, std::size_t> docs_per_category_;
  mutable std::mutex prompt_mutex_;
  std::string last_prompt_;
};

}  // namespace ragsmith::service
