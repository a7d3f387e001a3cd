#include "ragsmith/synth/rafs.hpp"

#include <algorithm>

#include "ragsmith/retrieval/bm25.hpp"

namespace ragsmith::synth {

std::vector<std::string> select_rafs_examples(const corpus::Document& target_doc,
                                              std::span<const corpus::HistoryEntry> history,
                                              std::size_t k) {
  if (history.empty() || k == 0) {
    return {};
  }
  std::vector<const corpus::HistoryEntry*> entries;
  for (const auto& e : history) {
    entries.push_back(&e);
  }
  std::stable_sort(entries.begin(), entries.end(),
                   [](auto* a, auto* b) { return a->entry_id < b->entry_id; });

  retrieval::Bm25Index index;
  for (const auto* e : entries) {
    index.add(e->question + " " + e->response);
  }
  const auto hits = index.search(target_doc.body, retrieval::Bm25Params{}, entries.size());

  std::vector<bool> taken(entries.size(), false);
  std::vector<std::string> questions;
  for (const auto& hit : hits) {
    if (questions.size() == k) {
      break;
    }
    taken[hit.ordinal] = true;
    questions.push_back(entries[hit.ordinal]->question);
  }
  for (std::size_t i = 0; i < entries.size() && questions.size() < k; ++i) {
    if (!taken[i]) {
      questions.push_back(entries[i]->question);
    }
  }
  return questions;
}

}  // namespace ragsmith::synth
