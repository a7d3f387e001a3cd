#include "ragsmith/raft/builder.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace ragsmith::raft {

std::size_t idk_count(double fraction, std::size_t n) {
  // The epsilon absorbs representation error such as 0.29 * 100 = 28.999...
  return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 1e-9));
}

RaftBuilder::RaftBuilder(const retrieval::HybridRetriever& retriever, prompts::PromptTemplates templates,
                         RaftBuildOptions options)
    : retriever_(retriever),
      index_(retriever.snapshot()),
      templates_(std::move(templates)),
      options_(std::move(options)) {
  options_.retrieval.validate();
}

RaftExample RaftBuilder::render(RaftExample ex, const std::vector<std::string>& chunk_ids) const {
  std::vector<ContextPassage> passages;
  passages.reserve(chunk_ids.size());
  for (const auto& id : chunk_ids) {
    const auto* chunk = index_->find(id);
    if (chunk == nullptr) {
      throw std::runtime_error("example " + ex.example_id + " refers to unknown chunk " + id);
    }
    passages.push_back({chunk->chunk_id, chunk->text});
  }
  auto rendered = render_raft_prompt(ex.question, passages, templates_, options_.max_prompt_chars);
  ex.prompt = std::move(rendered.prompt);
  ex.chunk_ids = std::move(rendered.chunk_ids);
  return ex;
}

RaftExample RaftBuilder::build(const synth::QAPair& qa, Split split) const {
  qa.validate();
  const auto result = retriever_.search_in(*index_, qa.question, options_.filter, options_.retrieval);
  std::vector<std::string> ids;
  ids.reserve(result.entries.size());
  for (const auto& e : result.entries) {
    ids.push_back(e.chunk_id);
  }
  RaftExample ex;
  ex.example_id = "ex-" + qa.qa_id;
  ex.question = qa.question;
  ex.answer = qa.answer;
  ex.source_doc_id = qa.source_doc_id;
  ex.category = qa.category;
  ex.split = split;
  ex.rafs_used = qa.provenance == synth::Provenance::SyntheticRafs;
  return render(std::move(ex), ids);
}

RaftExample RaftBuilder::make_missing_context(const RaftExample& ex) const {
  if (!ex.source_doc_id) {
    throw std::invalid_argument("make_missing_context: example " + ex.example_id + " has no source document");
  }
  std::vector<std::string> kept;
  for (const auto& id : ex.chunk_ids) {
    const auto* chunk = index_->find(id);
    if (chunk == nullptr) {
      throw std::runtime_error("example " + ex.example_id + " refers to unknown chunk " + id);
    }
    if (chunk->doc_id != *ex.source_doc_id) {
      kept.push_back(id);
    }
  }
  RaftExample out = render(ex, kept);
  out.missing_context = true;
  return out;
}

std::vector<RaftExample> RaftBuilder::augment_with_idk(std::vector<RaftExample> train, const IdkPolicy& policy,
                                                       const std::set<std::string>& exclude) const {
  if (!(policy.fraction >= 0.0 && policy.fraction <= 1.0)) {
    throw std::invalid_argument("augment_with_idk: fraction must lie in [0, 1]");
  }
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < train.size(); ++i) {
    if (train[i].split != Split::Train) {
      throw std::invalid_argument("augment_with_idk: example " + train[i].example_id + " is not a train example");
    }
    if (train[i].source_doc_id && !train[i].missing_context && !exclude.count(train[i].example_id)) {
      eligible.push_back(i);
    }
  }
  const auto n = idk_count(policy.fraction, train.size());
  if (n == 0) {
    return train;
  }
  if (n > eligible.size()) {
    throw std::invalid_argument("augment_with_idk: need " + std::to_string(n) + " examples but only " +
                                std::to_string(eligible.size()) + " are eligible");
  }
  std::mt19937_64 rng(policy.seed);
  std::shuffle(eligible.begin(), eligible.end(), rng);
  eligible.resize(n);
  std::sort(eligible.begin(), eligible.end());

  const auto originals = train.size();
  train.reserve(originals + n);
  for (auto i : eligible) {
    auto copy = make_missing_context(train[i]);
    copy.example_id += "-idk";
    copy.answer = policy.idk_label;
    copy.split = Split::Train;
    train.push_back(std::move(copy));
  }
  return train;
}

}  // namespace ragsmith::raft
