#include "ragsmith/prompts/templates.hpp"

#include "ragsmith/builtin_templates.hpp"
#include "ragsmith/common/jsonl.hpp"
#include "ragsmith/common/text.hpp"

namespace ragsmith::prompts {

PromptTemplates PromptTemplates::builtin() {
  return {std::string(builtin::kRefine), std::string(builtin::kSynthesize), std::string(builtin::kRaftPrompt)};
}

PromptTemplates PromptTemplates::load(const std::filesystem::path& dir) {
  return {jsonl::read_text(dir / "refine.txt"), jsonl::read_text(dir / "synthesize.txt"),
          jsonl::read_text(dir / "raft_prompt.txt")};
}

std::string PromptTemplates::version() const {
  std::string all = refine;
  all += '\x1f';
  all += synthesize;
  all += '\x1f';
  all += raft_prompt;
  return "tpl-" + text::hex64(text::fnv1a64(all)).substr(0, 12);
}

}  // namespace ragsmith::prompts
