#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ragsmith/gateway/gateway_types.hpp"
#include "ragsmith/prompts/templates.hpp"
#include "ragsmith/synth/qa_pair.hpp"

namespace ragsmith::synth {

/// A forum thread: the question plus its accepted answer, if any.
struct ForumPost {
  std::string post_id;
  std::string question;
  std::optional<std::string> answer;
  bool best_marked = false;
};

/// Reads `{post_id?, question, answer?, best_marked}` JSON lines.
std::vector<ForumPost> read_posts(const std::filesystem::path& path);

/// True when the trimmed text is nothing but a link (bare URL, <URL>,
/// www.host/..., or a single markdown link).
bool is_link_only(std::string_view answer);

/// Keeps posts with a marked best answer that is more than a bare link.
std::vector<QAPair> filter_q2a_posts(std::span<const ForumPost> posts);

class SynthError : public std::runtime_error {
 public:
  explicit SynthError(const std::string& what, std::string raw_output = {})
      : std::runtime_error(what), raw_output_(std::move(raw_output)) {}
  const std::string& raw_output() const { return raw_output_; }

 private:
  std::string raw_output_;
};

std::string render_refine_prompt(const QAPair& qa, const prompts::PromptTemplates& templates);

/// Rewrites the answer through the generator. The question is unchanged and
/// provenance becomes Q2A_refined. Throws SynthError("empty refinement") if
/// the model returns only whitespace.
QAPair refine_answer(const QAPair& qa, gateway::TextGenerator& generator,
                     const prompts::PromptTemplates& templates);

}  // namespace ragsmith::synth
