#pragma once

#include "ragsmith/gateway/gateway_types.hpp"

namespace ragsmith::gateway {

/// Offline stand-in for a seq2seq likelihood scorer. With source tokens S,
/// target tokens T (prefix followed by target) and V the vocabulary size of
/// S and T together:
///
///   P(t | S) = (count(t in S) + 1) / (|S| + V)
///   score    = mean over t in T of ln P(t | S)
///
/// Add-one smoothing keeps every score finite and <= 0. A target with no
/// tokens at all is scored as one unseen token.
class LexicalOracleScorer final : public SequenceScorer {
 public:
  SequenceScore score(std::string_view source, std::string_view target,
                      std::string_view prefix) override;
};

}  // namespace ragsmith::gateway
