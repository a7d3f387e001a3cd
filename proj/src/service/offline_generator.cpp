#include "ragsmith/service/offline_generator.hpp"

#include "ragsmith/common/text.hpp"
#include "ragsmith/raft/builder.hpp"

namespace ragsmith::service {
namespace {

constexpr std::string_view kDocumentOpen = "Document:\n\"\"\"\n";
constexpr std::string_view kDocumentClose = "\n\"\"\"\n";
constexpr std::string_view kOriginalAnswer = "Original answer:\n";
constexpr std::string_view kRewritten = "\n\nRewritten answer:";
constexpr std::string_view kContext = "Context:\n";
constexpr std::string_view kQuestion = "\n\nQuestion: ";
constexpr std::size_t kSummaryChars = 400;

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  bool pending_space = false;
  for (char c : s) {
    if (c == ' ' || c == '\n' || c == '\t' || c == '\r') {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out += ' ';
      pending_space = false;
    }
    out += c;
  }
  return out;
}

std::string synthesize(std::string_view document) {
  std::string first_line;
  for (auto& line : text::split(document, '\n')) {
    if (!text::is_blank(line)) {
      first_line = std::move(line);
      break;
    }
  }
  auto topic = collapse_whitespace(text::utf8_prefix(first_line, 80));
  auto summary = collapse_whitespace(text::utf8_prefix(document, kSummaryChars));
  if (topic.empty()) {
    topic = "this document";
  }
  return "QUESTION: What does the documentation explain about " + topic + "?\nANSWER: " + summary;
}

}  // namespace

OfflineGenerator::OfflineGenerator(std::string idk_label) : idk_label_(std::move(idk_label)) {}

std::string OfflineGenerator::generate(const gateway::GenerationRequest& request) {
  request.validate();
  const std::string_view prompt = request.prompt;
  std::string out;

  if (auto open = prompt.find(kDocumentOpen); open != std::string_view::npos) {
    const auto begin = open + kDocumentOpen.size();
    const auto close = prompt.rfind(kDocumentClose);
    if (close == std::string_view::npos || close < begin) {
      throw gateway::GatewayError("offline generator: unterminated document block", 1);
    }
    out = synthesize(prompt.substr(begin, close - begin));
  } else if (auto orig = prompt.find(kOriginalAnswer); orig != std::string_view::npos) {
    const auto begin = orig + kOriginalAnswer.size();
    const auto end = prompt.rfind(kRewritten);
    out = collapse_whitespace(prompt.substr(begin, end == std::string_view::npos || end < begin
                                                       ? std::string_view::npos
                                                       : end - begin));
  } else if (auto ctx = prompt.find(kContext); ctx != std::string_view::npos) {
    const auto begin = ctx + kContext.size();
    const auto first = std::string_view("[1]\n");
    if (prompt.substr(begin, first.size()) != first) {
      out = idk_label_;
    } else {
      const auto body = begin + first.size();
      auto end = prompt.find("\n\n[2]\n", body);
      if (end == std::string_view::npos) {
        end = prompt.rfind(kQuestion);
      }
      if (end == std::string_view::npos || end < body) {
        throw gateway::GatewayError("offline generator: malformed context block", 1);
      }
      out = std::string(prompt.substr(body, end - body));
    }
  } else {
    throw gateway::GatewayError("offline generator: unrecognized prompt", 1);
  }
  return gateway::apply_stop_markers(std::move(out), request.stop);
}

std::shared_ptr<gateway::TextGenerator> make_offline_generator() {
  return std::make_shared<OfflineGenerator>(std::string(raft::kDefaultIdkLabel));
}

}  // namespace ragsmith::service
