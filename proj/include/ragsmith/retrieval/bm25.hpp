#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ragsmith::retrieval {

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;
};

struct ScoredOrdinal {
  std::uint32_t ordinal;
  double score;
};

/// Restricts scoring to a subset of documents. Collection statistics (N,
/// df, average length) are taken over the subset only, so a filtered search
/// returns exactly what an index over the subset alone would.
struct Bm25Subset {
  std::function<bool(std::uint32_t)> contains;
  std::size_t doc_count = 0;
  double total_length = 0.0;
};

/// Okapi BM25 over an in-memory inverted index:
///   score(d, q) = sum over distinct t in q of
///       idf(t) * tf * (k1 + 1) / (tf + k1 * (1 - b + b * |d| / avgdl))
///   idf(t) = ln(1 + (N - df + 0.5) / (df + 0.5))
class Bm25Index {
 public:
  /// Appends a document and returns its ordinal.
  std::uint32_t add(std::string_view text);

  std::size_t size() const { return doc_lengths_.size(); }
  std::uint32_t doc_length(std::uint32_t ordinal) const { return doc_lengths_[ordinal]; }
  double total_length() const { return total_length_; }

  /// Documents with a positive score, best first, ties by ordinal ascending,
  /// at most `depth` of them. `subset` == nullptr scores the whole index.
  std::vector<ScoredOrdinal> search(std::string_view query, const Bm25Params& params,
                                    std::size_t depth, const Bm25Subset* subset = nullptr) const;

  void save(std::ostream& out) const;
  static Bm25Index load(std::istream& in);

 private:
  struct Posting {
    std::uint32_t ordinal;
    std::uint32_t tf;
  };
  std::unordered_map<std::string, std::vector<Posting>> postings_;
  std::vector<std::uint32_t> doc_lengths_;
  double total_length_ = 0.0;
};

}  // namespace ragsmith::retrieval
