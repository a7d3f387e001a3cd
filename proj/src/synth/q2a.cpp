#include "ragsmith/synth/q2a.hpp"

#include <regex>

#include "ragsmith/common/jsonl.hpp"
#include "ragsmith/common/text.hpp"

namespace ragsmith::synth {

std::vector<ForumPost> read_posts(const std::filesystem::path& path) {
  std::vector<ForumPost> posts;
  for (const auto& j : jsonl::read(path)) {
    ForumPost p;
    if (j.contains("post_id") && !j["post_id"].is_null()) {
      p.post_id = j["post_id"].is_string() ? j["post_id"].get<std::string>() : j["post_id"].dump();
    }
    p.question = j.at("question").get<std::string>();
    if (j.contains("answer") && !j["answer"].is_null()) {
      p.answer = j["answer"].get<std::string>();
    }
    p.best_marked = j.value("best_marked", false);
    posts.push_back(std::move(p));
  }
  return posts;
}

bool is_link_only(std::string_view answer) {
  static const std::regex link(
      R"(^(<?(https?|ftp|file)://\S+>?|www\.\S+|\[[^\]]*\]\(\S+\))$)",
      std::regex::ECMAScript | std::regex::icase);
  const std::string trimmed(text::trim(answer));
  return !trimmed.empty() && std::regex_match(trimmed, link);
}

std::vector<QAPair> filter_q2a_posts(std::span<const ForumPost> posts) {
  std::vector<QAPair> kept;
  for (const auto& post : posts) {
    if (!post.best_marked || !post.answer || text::is_blank(*post.answer) ||
        text::is_blank(post.question) || is_link_only(*post.answer)) {
      continue;
    }
    QAPair qa;
    qa.qa_id = "q2a-" + (post.post_id.empty()
                             ? text::hex64(text::fnv1a64(post.question)).substr(0, 12)
                             : post.post_id);
    qa.question = std::string(text::trim(post.question));
    qa.answer = std::string(text::trim(*post.answer));
    qa.provenance = Provenance::Q2ARaw;
    kept.push_back(std::move(qa));
  }
  return kept;
}

std::string render_refine_prompt(const QAPair& qa, const prompts::PromptTemplates& templates) {
  return text::render_placeholders(templates.refine, {{"question", qa.question}, {"answer", qa.answer}});
}

QAPair refine_answer(const QAPair& qa, gateway::TextGenerator& generator,
                     const prompts::PromptTemplates& templates) {
  gateway::GenerationRequest req;
  req.prompt = render_refine_prompt(qa, templates);
  const auto output = generator.generate(req);
  const auto refined = text::trim(output);
  if (refined.empty()) {
    throw SynthError("empty refinement", output);
  }
  QAPair out = qa;
  out.answer = std::string(refined);
  out.provenance = Provenance::Q2ARefined;
  return out;
}

}  // namespace ragsmith::synth
