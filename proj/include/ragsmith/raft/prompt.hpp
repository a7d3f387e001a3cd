#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ragsmith/prompts/templates.hpp"

namespace ragsmith::raft {

inline constexpr std::string_view kNoContextBlock =
    "[no context available] No passages could be retrieved for this question.";

inline constexpr std::size_t kDefaultMaxPromptChars = 32000;

struct ContextPassage {
  std::string chunk_id;
  std::string text;
};

struct RenderedPrompt {
  std::string prompt;
  std::vector<std::string> chunk_ids;  // the passages that made it in, in order
};

/// Numbered blocks "[1]\n<text>" separated by blank lines, or the
/// no-context block when `passages` is empty.
std::string render_context(std::span<const ContextPassage> passages);

/// Fills the RAFT template. While the prompt is longer than `max_chars`
/// characters the lowest-ranked passage is dropped.
RenderedPrompt render_raft_prompt(std::string_view question, std::span<const ContextPassage> ranked,
                                  const prompts::PromptTemplates& templates,
                                  std::size_t max_chars = kDefaultMaxPromptChars);

}  // namespace ragsmith::raft
