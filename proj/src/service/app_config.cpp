#include "ragsmith/service/app_config.hpp"

#include <cstdlib>
#include <stdexcept>

namespace ragsmith::service {
namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& value) {
  std::filesystem::path p(value);
  return p.is_absolute() ? p : base / p;
}

std::size_t get_size(const KeyValueConfig& kv, const std::string& key, std::size_t fallback) {
  const auto v = kv.get_int(key, static_cast<long long>(fallback));
  if (v < 0) {
    throw std::invalid_argument("config key " + key + " must not be negative");
  }
  return static_cast<std::size_t>(v);
}

}  // namespace

AppConfig AppConfig::from_config(const KeyValueConfig& kv, const std::filesystem::path& base_dir) {
  AppConfig cfg;
  cfg.corpus_dir = resolve(base_dir, kv.get_or("corpus_dir", "corpus"));
  cfg.index_dir = resolve(base_dir, kv.get_or("index_dir", "index"));
  if (auto v = kv.get("users_file")) {
    cfg.users_file = resolve(base_dir, *v);
  }
  if (auto v = kv.get("templates_dir")) {
    cfg.templates_dir = resolve(base_dir, *v);
  }
  if (auto v = kv.get("ingest.group_rules")) {
    cfg.group_rules = resolve(base_dir, *v);
  }
  if (auto v = kv.get("ingest.category_rules")) {
    cfg.category_rules = resolve(base_dir, *v);
  }
  cfg.max_prompt_chars = get_size(kv, "max_prompt_chars", cfg.max_prompt_chars);

  cfg.corpus.chunk_size = get_size(kv, "corpus.chunk_size", cfg.corpus.chunk_size);
  cfg.corpus.overlap = get_size(kv, "corpus.overlap", cfg.corpus.overlap);
  cfg.corpus.min_doc_chars = get_size(kv, "corpus.min_doc_chars", cfg.corpus.min_doc_chars);
  cfg.corpus.max_doc_chars = get_size(kv, "corpus.max_doc_chars", cfg.corpus.max_doc_chars);
  cfg.corpus.validate();

  cfg.retrieval.top_n = get_size(kv, "retrieval.top_n", cfg.retrieval.top_n);
  cfg.retrieval.rrf_k = kv.get_double("retrieval.rrf_k", cfg.retrieval.rrf_k);
  cfg.retrieval.candidate_depth = get_size(kv, "retrieval.candidate_depth", cfg.retrieval.candidate_depth);
  cfg.retrieval.bm25_k1 = kv.get_double("retrieval.bm25_k1", cfg.retrieval.bm25_k1);
  cfg.retrieval.bm25_b = kv.get_double("retrieval.bm25_b", cfg.retrieval.bm25_b);
  cfg.retrieval.validate();

  cfg.gateway = gateway::GatewayConfig::from_config(kv);
  return cfg;
}

AppConfig AppConfig::load(const std::optional<std::filesystem::path>& explicit_path) {
  std::optional<std::filesystem::path> path = explicit_path;
  if (!path) {
    if (const char* env = std::getenv(kConfigEnvVar); env != nullptr && *env != '\0') {
      path = env;
    }
  }
  if (!path) {
    return from_config(KeyValueConfig{}, std::filesystem::current_path());
  }
  auto base = std::filesystem::absolute(*path).parent_path();
  return from_config(KeyValueConfig::load(*path), base);
}

prompts::PromptTemplates AppConfig::templates() const {
  return templates_dir ? prompts::PromptTemplates::load(*templates_dir) : prompts::PromptTemplates::builtin();
}

}  // namespace ragsmith::service
