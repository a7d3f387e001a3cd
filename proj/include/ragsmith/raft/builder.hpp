#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ragsmith/prompts/templates.hpp"
#include "ragsmith/raft/example.hpp"
#include "ragsmith/raft/prompt.hpp"
#include "ragsmith/retrieval/hybrid_retriever.hpp"
#include "ragsmith/synth/qa_pair.hpp"

namespace ragsmith::raft {

inline constexpr std::string_view kDefaultIdkLabel =
    "I don't know. The provided context does not contain enough information to answer this question.";

struct IdkPolicy {
  double fraction = 0.1;
  std::string idk_label{kDefaultIdkLabel};
  std::uint64_t seed = 17;
};

struct RaftBuildOptions {
  retrieval::RetrievalConfig retrieval;
  retrieval::AccessFilter filter = retrieval::AccessFilter::unrestricted();
  std::size_t max_prompt_chars = kDefaultMaxPromptChars;
};

/// Turns QA pairs into rendered RAFT examples against one pinned index
/// snapshot.
class RaftBuilder {
 public:
  RaftBuilder(const retrieval::HybridRetriever& retriever, prompts::PromptTemplates templates,
              RaftBuildOptions options = {});

  /// Retrieves context for qa.question and renders the prompt. The source
  /// document is not forced into the context.
  RaftExample build(const synth::QAPair& qa, Split split) const;

  /// Drops every passage that comes from the example's source document and
  /// re-renders the prompt; the answer is kept. Throws std::invalid_argument
  /// when source_doc_id is absent.
  RaftExample make_missing_context(const RaftExample& ex) const;

  /// Appends floor(fraction * |train|) missing-context copies labelled with
  /// the refusal sentence, drawn uniformly (seeded) from train examples that
  /// have a source document and are not in `exclude`. Originals are left
  /// untouched; copies get the id suffix "-idk".
  std::vector<RaftExample> augment_with_idk(std::vector<RaftExample> train, const IdkPolicy& policy,
                                            const std::set<std::string>& exclude = {}) const;

  const retrieval::ChunkIndex& index() const { return *index_; }
  const RaftBuildOptions& options() const { return options_; }
  const prompts::PromptTemplates& templates() const { return templates_; }

 private:
  RaftExample render(RaftExample ex, const std::vector<std::string>& chunk_ids) const;

  const retrieval::HybridRetriever& retriever_;
  std::shared_ptr<const retrieval::ChunkIndex> index_;
  prompts::PromptTemplates templates_;
  RaftBuildOptions options_;
};

/// Count of IDK copies for a train set of size n: floor(fraction * n).
std::size_t idk_count(double fraction, std::size_t n);

}  // namespace ragsmith::raft
