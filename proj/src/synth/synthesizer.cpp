#include "ragsmith/synth/synthesizer.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <optional>
#include <random>

#include "ragsmith/common/parallel.hpp"
#include "ragsmith/common/text.hpp"
#include "ragsmith/corpus/chunker.hpp"
#include "ragsmith/synth/rafs.hpp"

namespace ragsmith::synth {

namespace {

std::string single_line(std::string_view s) {
  std::string out;
  bool space = false;
  for (char c : text::trim(s)) {
    if (c == '\n' || c == '\r' || c == '\t' || c == ' ') {
      space = true;
      continue;
    }
    if (space && !out.empty()) {
      out.push_back(' ');
    }
    space = false;
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::string render_few_shot_block(std::span<const std::string> examples, const SynthConfig& cfg) {
  const auto n = std::min(examples.size(), cfg.rafs_k);
  if (n == 0) {
    return {};
  }
  std::string block =
      "\nExample questions that real users have asked about related topics. "
      "Write your question in a similar style and at a similar level of detail, but do not copy them:\n";
  for (std::size_t i = 0; i < n; ++i) {
    block += std::to_string(i + 1) + ". " + single_line(examples[i]) + "\n";
  }
  return block;
}

std::string render_synthesis_prompt(const corpus::Document& doc, std::span<const std::string> rafs,
                                    const SynthConfig& cfg, const prompts::PromptTemplates& templates) {
  return text::render_placeholders(templates.synthesize,
                                   {{"document", doc.body},
                                    {"few_shot_block", render_few_shot_block(rafs, cfg)},
                                    {"question_delimiter", cfg.question_delimiter},
                                    {"answer_delimiter", cfg.answer_delimiter}});
}

ParsedQA parse_generation(std::string_view output, const SynthConfig& cfg) {
  const auto q = output.find(cfg.question_delimiter);
  if (q == std::string_view::npos) {
    throw SynthError("generation is missing `" + cfg.question_delimiter + "`", std::string(output));
  }
  const auto q_body = q + cfg.question_delimiter.size();
  const auto a = output.find(cfg.answer_delimiter, q_body);
  if (a == std::string_view::npos) {
    throw SynthError("generation is missing `" + cfg.answer_delimiter + "`", std::string(output));
  }
  ParsedQA parsed{std::string(text::trim(output.substr(q_body, a - q_body))),
                  std::string(text::trim(output.substr(a + cfg.answer_delimiter.size())))};
  if (parsed.question.empty() || parsed.answer.empty()) {
    throw SynthError("generation has an empty question or answer", std::string(output));
  }
  return parsed;
}

std::string format_generation(const ParsedQA& qa, const SynthConfig& cfg) {
  return cfg.question_delimiter + " " + qa.question + "\n" + cfg.answer_delimiter + " " + qa.answer;
}

QAPair generate_synthetic_qa(const corpus::Document& doc, std::span<const std::string> rafs,
                             const SynthConfig& cfg, gateway::TextGenerator& generator,
                             const prompts::PromptTemplates& templates) {
  gateway::GenerationRequest req;
  req.prompt = render_synthesis_prompt(doc, rafs, cfg, templates);
  const auto parsed = parse_generation(generator.generate(req), cfg);

  QAPair qa;
  qa.qa_id = "syn-" + doc.doc_id;
  qa.question = parsed.question;
  qa.answer = parsed.answer;
  qa.provenance = std::min(rafs.size(), cfg.rafs_k) > 0 ? Provenance::SyntheticRafs : Provenance::Synthetic;
  qa.source_doc_id = doc.doc_id;
  qa.category = doc.category;
  return qa;
}

SynthRun run_synthesis(std::span<const corpus::Document> docs, std::span<const corpus::HistoryEntry> history,
                       const SynthConfig& cfg, gateway::TextGenerator& generator,
                       const prompts::PromptTemplates& templates, std::size_t workers) {
  std::vector<const corpus::Document*> ordered;
  for (const auto& d : docs) {
    ordered.push_back(&d);
  }
  std::sort(ordered.begin(), ordered.end(), [](auto* a, auto* b) { return a->doc_id < b->doc_id; });

  std::vector<std::optional<QAPair>> results(ordered.size());
  std::vector<std::string> errors(ordered.size());
  parallel_for(ordered.size(), workers, [&](std::size_t i) {
    const auto& doc = *ordered[i];
    try {
      std::vector<std::string> rafs;
      if (cfg.use_rafs && cfg.rafs_k > 0) {
        rafs = select_rafs_examples(doc, history, cfg.rafs_k);
      }
      results[i] = generate_synthetic_qa(doc, rafs, cfg, generator, templates);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  SynthRun run;
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    if (results[i]) {
      run.pairs.push_back(std::move(*results[i]));
    } else {
      spdlog::warn("synthesis skipped {}: {}", ordered[i]->doc_id, errors[i]);
      run.failures.emplace_back(ordered[i]->doc_id, errors[i]);
    }
  }
  return run;
}

std::vector<corpus::Document> sample_source_documents(std::vector<corpus::Document> docs,
                                                      const corpus::CorpusConfig& cfg,
                                                      std::size_t sample_size, std::uint64_t seed) {
  auto pool = corpus::filter_and_truncate(std::move(docs), cfg);
  std::sort(pool.begin(), pool.end(), [](const auto& a, const auto& b) { return a.doc_id < b.doc_id; });
  if (sample_size > 0 && sample_size < pool.size()) {
    std::mt19937_64 rng(seed);
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(sample_size);
    std::sort(pool.begin(), pool.end(), [](const auto& a, const auto& b) { return a.doc_id < b.doc_id; });
  }
  return pool;
}

}  // namespace ragsmith::synth
