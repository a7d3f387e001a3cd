#pragma once

#include <filesystem>
#include <string>

namespace ragsmith::prompts {

/// The three canonical prompt templates. The RAFT template is shared by
/// dataset building and live inference so both see identical prompts.
struct PromptTemplates {
  std::string refine;       // {{question}}, {{answer}}
  std::string synthesize;   // {{document}}, {{few_shot_block}}, {{question_delimiter}}, {{answer_delimiter}}
  std::string raft_prompt;  // {{context}}, {{question}}

  /// Compiled-in copies of templates/*.txt.
  static PromptTemplates builtin();
  /// Reads refine.txt, synthesize.txt and raft_prompt.txt from `dir`.
  static PromptTemplates load(const std::filesystem::path& dir);

  /// Short content hash identifying this template set.
  std::string version() const;
};

}  // namespace ragsmith::prompts
