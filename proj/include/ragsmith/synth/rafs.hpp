#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ragsmith/corpus/types.hpp"

namespace ragsmith::synth {

/// Retrieval-augmented few-shot selection. Each history entry is indexed as
/// "question response"; the target document body is the BM25 query. Returns
/// the questions of the k best entries (ties and zero-score fill-ins in
/// entry_id order).
std::vector<std::string> select_rafs_examples(const corpus::Document& target_doc,
                                              std::span<const corpus::HistoryEntry> history,
                                              std::size_t k);

}  // namespace ragsmith::synth
