#include "ragsmith/gateway/lexical_scorer.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "ragsmith/common/text.hpp"

namespace ragsmith::gateway {

SequenceScore LexicalOracleScorer::score(std::string_view source, std::string_view target,
                                         std::string_view prefix) {
  if (target.empty()) {
    throw std::invalid_argument("score_sequence: empty target");
  }
  const auto source_tokens = text::tokenize(source);
  std::string full_target(prefix);
  full_target.append(target);
  auto target_tokens = text::tokenize(full_target);
  if (target_tokens.empty()) {
    // Cannot collide with a real token: tokens never contain '<'.
    target_tokens.emplace_back("<empty>");
  }

  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& t : source_tokens) {
    ++counts[t];
  }
  std::unordered_set<std::string> vocab(source_tokens.begin(), source_tokens.end());
  vocab.insert(target_tokens.begin(), target_tokens.end());

  const double denom = static_cast<double>(source_tokens.size() + vocab.size());
  double total = 0.0;
  for (const auto& t : target_tokens) {
    const auto it = counts.find(t);
    const double c = it == counts.end() ? 0.0 : static_cast<double>(it->second);
    total += std::log((c + 1.0) / denom);
  }
  return {total / static_cast<double>(target_tokens.size())};
}

}  // namespace ragsmith::gateway
