#include "ragsmith/raft/prompt.hpp"

#include "ragsmith/common/text.hpp"

namespace ragsmith::raft {

std::string render_context(std::span<const ContextPassage> passages) {
  if (passages.empty()) {
    return std::string(kNoContextBlock);
  }
  std::string out;
  for (std::size_t i = 0; i < passages.size(); ++i) {
    if (i > 0) {
      out += "\n\n";
    }
    out += "[" + std::to_string(i + 1) + "]\n";
    out += passages[i].text;
  }
  return out;
}

RenderedPrompt render_raft_prompt(std::string_view question, std::span<const ContextPassage> ranked,
                                  const prompts::PromptTemplates& templates, std::size_t max_chars) {
  auto kept = ranked;
  while (true) {
    RenderedPrompt out;
    out.prompt = text::render_placeholders(
        templates.raft_prompt, {{"context", render_context(kept)}, {"question", std::string(question)}});
    if (kept.empty() || text::utf8_length(out.prompt) <= max_chars) {
      for (const auto& p : kept) {
        out.chunk_ids.push_back(p.chunk_id);
      }
      return out;
    }
    kept = kept.first(kept.size() - 1);
  }
}

}  // namespace ragsmith::raft
