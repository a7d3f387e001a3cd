#include "ragsmith/retrieval/bm25.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>

#include "ragsmith/common/text.hpp"
#include "ragsmith/retrieval/binary_io.hpp"

namespace ragsmith::retrieval {

std::uint32_t Bm25Index::add(std::string_view text) {
  const auto ordinal = static_cast<std::uint32_t>(doc_lengths_.size());
  const auto tokens = text::tokenize(text);
  std::map<std::string, std::uint32_t> tf;
  for (const auto& t : tokens) {
    ++tf[t];
  }
  for (auto& [term, count] : tf) {
    postings_[term].push_back({ordinal, count});
  }
  doc_lengths_.push_back(static_cast<std::uint32_t>(tokens.size()));
  total_length_ += static_cast<double>(tokens.size());
  return ordinal;
}

std::vector<ScoredOrdinal> Bm25Index::search(std::string_view query, const Bm25Params& params,
                                             std::size_t depth, const Bm25Subset* subset) const {
  const auto tokens = text::tokenize(query);
  const std::set<std::string> terms(tokens.begin(), tokens.end());
  const double n_docs = subset ? static_cast<double>(subset->doc_count) : static_cast<double>(size());
  const double total = subset ? subset->total_length : total_length_;
  if (terms.empty() || n_docs == 0.0 || depth == 0) {
    return {};
  }
  const double avgdl = total / n_docs;

  std::unordered_map<std::uint32_t, double> scores;
  std::vector<const Posting*> visible;
  for (const auto& term : terms) {
    const auto it = postings_.find(term);
    if (it == postings_.end()) {
      continue;
    }
    visible.clear();
    for (const auto& p : it->second) {
      if (!subset || subset->contains(p.ordinal)) {
        visible.push_back(&p);
      }
    }
    if (visible.empty()) {
      continue;
    }
    const double df = static_cast<double>(visible.size());
    const double idf = std::log(1.0 + (n_docs - df + 0.5) / (df + 0.5));
    for (const Posting* p : visible) {
      const double tf = p->tf;
      // avgdl > 0 whenever a posting is visible.
      const double norm = 1.0 - params.b + params.b * doc_lengths_[p->ordinal] / avgdl;
      scores[p->ordinal] += idf * tf * (params.k1 + 1.0) / (tf + params.k1 * norm);
    }
  }

  std::vector<ScoredOrdinal> ranked;
  ranked.reserve(scores.size());
  for (const auto& [ordinal, score] : scores) {
    if (score > 0.0) {
      ranked.push_back({ordinal, score});
    }
  }
  const auto by_score = [](const ScoredOrdinal& a, const ScoredOrdinal& b) {
    return a.score != b.score ? a.score > b.score : a.ordinal < b.ordinal;
  };
  if (ranked.size() > depth) {
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(depth), ranked.end(), by_score);
    ranked.resize(depth);
  } else {
    std::sort(ranked.begin(), ranked.end(), by_score);
  }
  return ranked;
}

void Bm25Index::save(std::ostream& out) const {
  binio::write_u64(out, doc_lengths_.size());
  for (auto len : doc_lengths_) {
    binio::write_u32(out, len);
  }
  // Sorted term order keeps the file byte-stable.
  std::vector<const std::string*> terms;
  terms.reserve(postings_.size());
  for (const auto& [term, list] : postings_) {
    terms.push_back(&term);
  }
  std::sort(terms.begin(), terms.end(), [](auto* a, auto* b) { return *a < *b; });
  binio::write_u64(out, terms.size());
  for (const auto* term : terms) {
    const auto& list = postings_.at(*term);
    binio::write_string(out, *term);
    binio::write_u64(out, list.size());
    for (const auto& p : list) {
      binio::write_u32(out, p.ordinal);
      binio::write_u32(out, p.tf);
    }
  }
}

Bm25Index Bm25Index::load(std::istream& in) {
  Bm25Index index;
  const auto n_docs = binio::read_u64(in);
  index.doc_lengths_.reserve(n_docs);
  for (std::uint64_t i = 0; i < n_docs; ++i) {
    index.doc_lengths_.push_back(binio::read_u32(in));
    index.total_length_ += index.doc_lengths_.back();
  }
  const auto n_terms = binio::read_u64(in);
  for (std::uint64_t t = 0; t < n_terms; ++t) {
    auto term = binio::read_string(in);
    const auto n = binio::read_u64(in);
    auto& list = index.postings_[std::move(term)];
    list.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
      const auto ordinal = binio::read_u32(in);
      const auto tf = binio::read_u32(in);
      if (ordinal >= n_docs) {
        throw std::runtime_error("lexical index: posting refers to a missing document");
      }
      list.push_back({ordinal, tf});
    }
  }
  return index;
}

}  // namespace ragsmith::retrieval
