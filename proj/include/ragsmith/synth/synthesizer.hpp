#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ragsmith/corpus/types.hpp"
#include "ragsmith/gateway/gateway_types.hpp"
#include "ragsmith/prompts/templates.hpp"
#include "ragsmith/synth/q2a.hpp"
#include "ragsmith/synth/qa_pair.hpp"

namespace ragsmith::synth {

struct SynthConfig {
  std::size_t rafs_k = 5;
  bool use_rafs = false;
  std::string question_delimiter = "QUESTION:";
  std::string answer_delimiter = "ANSWER:";
};

struct ParsedQA {
  std::string question;
  std::string answer;
};

/// Few-shot block listing up to cfg.rafs_k example questions; empty when
/// there are none.
std::string render_few_shot_block(std::span<const std::string> examples, const SynthConfig& cfg);

std::string render_synthesis_prompt(const corpus::Document& doc, std::span<const std::string> rafs,
                                    const SynthConfig& cfg, const prompts::PromptTemplates& templates);

/// Splits model output on the first question delimiter and the first answer
/// delimiter after it. Throws SynthError (carrying the raw output) when a
/// delimiter is missing or either part is blank.
ParsedQA parse_generation(std::string_view output, const SynthConfig& cfg);
std::string format_generation(const ParsedQA& qa, const SynthConfig& cfg);

/// One synthetic pair for `doc`. Provenance is Synthetic_RAFS iff at least
/// one few-shot example made it into the prompt.
QAPair generate_synthetic_qa(const corpus::Document& doc, std::span<const std::string> rafs,
                             const SynthConfig& cfg, gateway::TextGenerator& generator,
                             const prompts::PromptTemplates& templates);

struct SynthRun {
  std::vector<QAPair> pairs;                                  // sorted by source doc id
  std::vector<std::pair<std::string, std::string>> failures;  // doc id, reason
};

/// Generates one pair per document with document-level parallelism. With
/// cfg.use_rafs each document gets few-shot questions selected from
/// `history`. Failed documents are logged and skipped.
SynthRun run_synthesis(std::span<const corpus::Document> docs, std::span<const corpus::HistoryEntry> history,
                       const SynthConfig& cfg, gateway::TextGenerator& generator,
                       const prompts::PromptTemplates& templates, std::size_t workers = 4);

/// Applies the length filter/truncation and draws up to `sample_size`
/// documents uniformly at random (all of them when sample_size is 0 or not
/// smaller than the pool). The result is sorted by doc_id.
std::vector<corpus::Document> sample_source_documents(std::vector<corpus::Document> docs,
                                                      const corpus::CorpusConfig& cfg,
                                                      std::size_t sample_size, std::uint64_t seed);

}  // namespace ragsmith::synth
