#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "ragsmith/gateway/gateway_types.hpp"

namespace ragsmith::service {

/// Deterministic generator used when no model endpoint is configured. It
/// recognizes the three built-in prompt layouts:
///   synthesis  -> "QUESTION: ...\nANSWER: ..." built from the document text
///   refinement -> the original answer with whitespace collapsed
///   RAFT/RAG   -> the text of context passage [1], or `idk_label` when the
///                 prompt carries no passages
/// Any other prompt raises GatewayError.
class OfflineGenerator final : public gateway::TextGenerator {
 public:
  explicit OfflineGenerator(std::string idk_label);
  std::string generate(const gateway::GenerationRequest& request) override;

 private:
  std::string idk_label_;
};

std::shared_ptr<gateway::TextGenerator> make_offline_generator();

}  // namespace ragsmith::service
