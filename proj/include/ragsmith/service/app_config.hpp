#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>

#include "ragsmith/common/kv_config.hpp"
#include "ragsmith/corpus/types.hpp"
#include "ragsmith/gateway/gateway.hpp"
#include "ragsmith/prompts/templates.hpp"
#include "ragsmith/retrieval/hybrid_retriever.hpp"

namespace ragsmith::service {

inline constexpr const char* kConfigEnvVar = "ASSISTANT_CONFIG";

/// Settings shared by the CLI and the HTTP service. Relative paths are
/// resolved against the directory holding the config file.
///
/// Keys: corpus_dir, index_dir, users_file, templates_dir, max_prompt_chars,
/// ingest.group_rules, ingest.category_rules, corpus.chunk_size,
/// corpus.overlap, corpus.min_doc_chars, corpus.max_doc_chars,
/// retrieval.top_n, retrieval.rrf_k, retrieval.candidate_depth,
/// retrieval.bm25_k1, retrieval.bm25_b and the gateway.* keys.
struct AppConfig {
  std::filesystem::path corpus_dir = "corpus";
  std::filesystem::path index_dir = "index";
  std::optional<std::filesystem::path> users_file;
  std::optional<std::filesystem::path> templates_dir;
  std::optional<std::filesystem::path> group_rules;
  std::optional<std::filesystem::path> category_rules;
  std::size_t max_prompt_chars = 32000;
  corpus::CorpusConfig corpus;
  retrieval::RetrievalConfig retrieval;
  gateway::GatewayConfig gateway;

  static AppConfig from_config(const KeyValueConfig& kv, const std::filesystem::path& base_dir);

  /// Reads `explicit_path` if given, else the file named by ASSISTANT_CONFIG,
  /// else returns defaults relative to the working directory.
  static AppConfig load(const std::optional<std::filesystem::path>& explicit_path);

  prompts::PromptTemplates templates() const;
};

}  // namespace ragsmith::service
