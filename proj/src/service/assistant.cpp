#include "ragsmith/service/assistant.hpp"

#include <chrono>
#include <stdexcept>

#include <spdlog/spdlog.h>

#include "ragsmith/common/text.hpp"
#include "ragsmith/raft/prompt.hpp"

namespace ragsmith::service {

nlohmann::ordered_json QueryResponse::to_json() const {
  nlohmann::ordered_json prov = nlohmann::ordered_json::array();
  for (const auto& p : provenance) {
    prov.push_back({{"chunk_id", p.chunk_id},
                    {"doc_id", p.doc_id},
                    {"title", p.title},
                    {"category", corpus::to_string(p.category)},
                    {"access_groups", p.access_groups},
                    {"fused_score", p.fused_score}});
  }
  nlohmann::ordered_json j{{"answer", answer}, {"provenance", prov}, {"degraded", degraded}};
  if (degraded) {
    j["degraded_reason"] = degraded_reason;
  }
  j["timing_ms"] = timing_ms;
  if (error) {
    j["error"] = *error;
  }
  return j;
}

AssistantService::AssistantService(std::shared_ptr<retrieval::HybridRetriever> retriever,
                                   std::shared_ptr<gateway::TextGenerator> generator, UserDirectory users,
                                   corpus::HistoryStore& history, prompts::PromptTemplates templates,
                                   std::span<const corpus::Document> documents, AssistantOptions options)
    : retriever_(std::move(retriever)),
      generator_(std::move(generator)),
      users_(std::move(users)),
      history_(history),
      templates_(std::move(templates)),
      options_(std::move(options)) {
  options_.retrieval.validate();
  for (const auto& doc : documents) {
    titles_[doc.doc_id] = doc.title;
    ++docs_per_category_[doc.category];
  }
}

QueryResponse AssistantService::handle_query(std::string_view user_id, std::string_view question,
                                             std::optional<std::size_t> top_n) {
  const auto started = std::chrono::steady_clock::now();
  if (text::is_blank(question)) {
    throw corpus::ValidationError("question must not be empty");
  }
  auto cfg = options_.retrieval;
  if (top_n) {
    if (*top_n == 0) {
      throw corpus::ValidationError("top_n must be positive");
    }
    cfg.top_n = *top_n;
  }

  const retrieval::AccessFilter filter(users_.groups_for(user_id));
  const auto index = retriever_->snapshot();
  const auto result = retriever_->search_in(*index, question, filter, cfg);

  std::vector<raft::ContextPassage> passages;
  std::unordered_map<std::string, double> fused;
  for (const auto& entry : result.entries) {
    const auto* chunk = index->find(entry.chunk_id);
    if (chunk == nullptr || !filter.authorizes(chunk->access_groups)) {
      // Retrieval never returns such chunks; refuse to build a prompt if it did.
      throw std::logic_error("retrieval returned an unusable chunk " + entry.chunk_id);
    }
    passages.push_back({chunk->chunk_id, chunk->text});
    fused[entry.chunk_id] = entry.fused_score;
  }
  auto rendered = raft::render_raft_prompt(question, passages, templates_, options_.max_prompt_chars);

  QueryResponse response;
  response.degraded = result.degraded;
  response.degraded_reason = result.degraded_reason;
  for (const auto& id : rendered.chunk_ids) {
    const auto* chunk = index->find(id);
    ProvenanceItem item;
    item.chunk_id = chunk->chunk_id;
    item.doc_id = chunk->doc_id;
    auto t = titles_.find(chunk->doc_id);
    item.title = t == titles_.end() ? chunk->doc_id : t->second;
    item.category = chunk->category;
    item.access_groups = chunk->access_groups;
    item.fused_score = fused[id];
    response.provenance.push_back(std::move(item));
  }
  {
    std::lock_guard lock(prompt_mutex_);
    last_prompt_ = rendered.prompt;
  }

  gateway::GenerationRequest request;
  request.prompt = std::move(rendered.prompt);
  request.max_tokens = options_.max_tokens;
  try {
    response.answer = generator_->generate(request);
    corpus::HistoryEntry entry;
    entry.question = std::string(question);
    entry.response = response.answer;
    if (!user_id.empty()) {
      entry.user_id = std::string(user_id);
    }
    history_.append(std::move(entry));
  } catch (const std::exception& e) {
    spdlog::warn("generation failed: {}", e.what());
    response.error = std::string("generation failed: ") + e.what();
  }
  response.timing_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  return response;
}

nlohmann::ordered_json AssistantService::corpus_stats() const {
  const auto index = retriever_->snapshot();
  std::map<corpus::Category, std::size_t> chunks;
  std::size_t restricted = 0;
  for (const auto& c : index->chunks()) {
    ++chunks[c.category];
    restricted += c.access_groups.empty() ? 0 : 1;
  }
  nlohmann::ordered_json per = nlohmann::ordered_json::object();
  for (auto category : {corpus::Category::ParameterReference, corpus::Category::Timing, corpus::Category::DevOps,
                        corpus::Category::DesignGuide, corpus::Category::CommandReference, corpus::Category::Other}) {
    auto d = docs_per_category_.find(category);
    auto c = chunks.find(category);
    per[std::string(corpus::to_string(category))] = {{"documents", d == docs_per_category_.end() ? 0 : d->second},
                                                     {"chunks", c == chunks.end() ? 0 : c->second}};
  }
  return {{"documents", titles_.size()},
          {"chunks", index->size()},
          {"restricted_chunks", restricted},
          {"embedding_dim", index->dimension()},
          {"history_entries", history_.size()},
          {"per_category", per}};
}

std::string AssistantService::last_prompt() const {
  std::lock_guard lock(prompt_mutex_);
  return last_prompt_;
}

}  // namespace ragsmith::service
