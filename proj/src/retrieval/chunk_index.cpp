#include "ragsmith/retrieval/chunk_index.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "ragsmith/retrieval/binary_io.hpp"

namespace ragsmith::retrieval {

namespace fs = std::filesystem;

namespace {

constexpr char kLexicalMagic[4] = {'R', 'S', 'L', 'X'};
constexpr char kVectorMagic[4] = {'R', 'S', 'V', 'X'};

void write_header(std::ostream& out, const char (&magic)[4]) {
  out.write(magic, 4);
  out.put(static_cast<char>(ChunkIndex::kFormatVersion));
}

void check_header(std::istream& in, const char (&magic)[4], const fs::path& path) {
  char got[5];
  binio::read_exact(in, got, 5);
  if (std::memcmp(got, magic, 4) != 0) {
    throw std::runtime_error(path.string() + ": not an index file (bad magic)");
  }
  if (static_cast<std::uint8_t>(got[4]) != ChunkIndex::kFormatVersion) {
    throw std::runtime_error(path.string() + ": unsupported index version " +
                             std::to_string(static_cast<int>(static_cast<std::uint8_t>(got[4]))));
  }
}

template <typename Less>
std::vector<ScoredChunk> take_top(std::vector<ScoredChunk> all, std::size_t depth, Less less) {
  if (all.size() > depth) {
    std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(depth), all.end(), less);
    all.resize(depth);
  } else {
    std::sort(all.begin(), all.end(), less);
  }
  return all;
}

}  // namespace

std::shared_ptr<const ChunkIndex> ChunkIndex::build(std::vector<corpus::Chunk> chunks,
                                                    gateway::Embedder& embedder,
                                                    std::size_t embed_batch) {
  std::shared_ptr<ChunkIndex> index(new ChunkIndex());
  std::sort(chunks.begin(), chunks.end(),
            [](const auto& a, const auto& b) { return a.chunk_id < b.chunk_id; });
  index->chunks_ = std::move(chunks);
  for (const auto& c : index->chunks_) {
    index->lexical_.add(c.text);
  }

  embed_batch = std::max<std::size_t>(embed_batch, 1);
  for (std::size_t begin = 0; begin < index->chunks_.size(); begin += embed_batch) {
    const auto end = std::min(begin + embed_batch, index->chunks_.size());
    std::vector<std::string> texts;
    for (std::size_t i = begin; i < end; ++i) {
      texts.push_back(index->chunks_[i].text);
    }
    auto vectors = embedder.embed(texts);
    if (vectors.size() != texts.size()) {
      throw std::runtime_error("embedder returned the wrong number of vectors");
    }
    for (auto& v : vectors) {
      if (index->dimension_ == 0) {
        index->dimension_ = v.size();
      }
      if (v.size() != index->dimension_ || v.empty()) {
        throw std::runtime_error("embedder returned vectors of inconsistent dimension");
      }
      index->vectors_.insert(index->vectors_.end(), v.begin(), v.end());
    }
  }
  index->finish();
  return index;
}

void ChunkIndex::finish() {
  by_id_.clear();
  class_of_.clear();
  classes_.clear();
  std::map<corpus::GroupSet, std::uint32_t> class_ids;
  for (std::uint32_t i = 0; i < chunks_.size(); ++i) {
    const auto& c = chunks_[i];
    if (!by_id_.emplace(c.chunk_id, i).second) {
      throw std::runtime_error("duplicate chunk id `" + c.chunk_id + "`");
    }
    auto [it, inserted] = class_ids.try_emplace(c.access_groups, static_cast<std::uint32_t>(classes_.size()));
    if (inserted) {
      classes_.push_back({c.access_groups, 0, 0.0});
    }
    class_of_.push_back(it->second);
    classes_[it->second].doc_count += 1;
    classes_[it->second].total_length += lexical_.doc_length(i);
  }
}

std::vector<bool> ChunkIndex::authorized_classes(const AccessFilter& filter) const {
  std::vector<bool> allowed(classes_.size());
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    allowed[i] = filter.authorizes(classes_[i].groups);
  }
  return allowed;
}

std::vector<ScoredChunk> ChunkIndex::bm25_search(std::string_view query, const AccessFilter& filter,
                                                 std::size_t depth, const Bm25Params& params) const {
  const auto allowed = authorized_classes(filter);
  Bm25Subset subset;
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    if (allowed[i]) {
      subset.doc_count += classes_[i].doc_count;
      subset.total_length += classes_[i].total_length;
    }
  }
  subset.contains = [&](std::uint32_t ordinal) { return allowed[class_of_[ordinal]]; };
  std::vector<ScoredChunk> out;
  for (const auto& hit : lexical_.search(query, params, depth, &subset)) {
    out.push_back({hit.ordinal, chunks_[hit.ordinal].chunk_id, hit.score});
  }
  return out;
}

std::vector<ScoredChunk> ChunkIndex::vector_search(std::span<const float> query, const AccessFilter& filter,
                                                   std::size_t depth) const {
  if (chunks_.empty() || depth == 0) {
    return {};
  }
  if (query.size() != dimension_) {
    throw std::invalid_argument("vector_search: query dimension " + std::to_string(query.size()) +
                                " does not match index dimension " + std::to_string(dimension_));
  }
  const auto allowed = authorized_classes(filter);
  std::vector<ScoredChunk> all;
  for (std::uint32_t i = 0; i < chunks_.size(); ++i) {
    if (!allowed[class_of_[i]]) {
      continue;
    }
    const float* row = vectors_.data() + static_cast<std::size_t>(i) * dimension_;
    double dot = 0.0;
    for (std::size_t d = 0; d < dimension_; ++d) {
      dot += static_cast<double>(row[d]) * static_cast<double>(query[d]);
    }
    all.push_back({i, {}, dot});
  }
  auto top = take_top(std::move(all), depth, [](const ScoredChunk& a, const ScoredChunk& b) {
    return a.score != b.score ? a.score > b.score : a.ordinal < b.ordinal;
  });
  for (auto& s : top) {
    s.chunk_id = chunks_[s.ordinal].chunk_id;
  }
  return top;
}

const corpus::Chunk* ChunkIndex::find(std::string_view chunk_id) const {
  const auto it = by_id_.find(std::string(chunk_id));
  return it == by_id_.end() ? nullptr : &chunks_[it->second];
}

std::span<const float> ChunkIndex::vector(std::uint32_t ordinal) const {
  return {vectors_.data() + static_cast<std::size_t>(ordinal) * dimension_, dimension_};
}

void ChunkIndex::save(const fs::path& dir) const {
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "lexical.bin", std::ios::binary | std::ios::trunc);
    write_header(out, kLexicalMagic);
    binio::write_u64(out, chunks_.size());
    for (const auto& c : chunks_) {
      binio::write_string(out, c.chunk_id);
      binio::write_string(out, c.doc_id);
      binio::write_u64(out, c.seq);
      binio::write_u64(out, c.start);
      binio::write_u64(out, c.end);
      binio::write_string(out, c.text);
      binio::write_u32(out, static_cast<std::uint32_t>(c.category));
      binio::write_u64(out, c.access_groups.size());
      for (const auto& g : c.access_groups) {
        binio::write_string(out, g);
      }
    }
    lexical_.save(out);
    if (!out) {
      throw std::runtime_error("failed writing " + (dir / "lexical.bin").string());
    }
  }
  {
    std::ofstream out(dir / "vectors.bin", std::ios::binary | std::ios::trunc);
    write_header(out, kVectorMagic);
    binio::write_u64(out, chunks_.size());
    binio::write_u64(out, dimension_);
    for (float f : vectors_) {
      binio::write_u32(out, std::bit_cast<std::uint32_t>(f));
    }
    if (!out) {
      throw std::runtime_error("failed writing " + (dir / "vectors.bin").string());
    }
  }
}

std::shared_ptr<const ChunkIndex> ChunkIndex::load(const fs::path& dir) {
  std::shared_ptr<ChunkIndex> index(new ChunkIndex());
  const auto lexical_path = dir / "lexical.bin";
  const auto vector_path = dir / "vectors.bin";
  {
    std::ifstream in(lexical_path, std::ios::binary);
    if (!in) {
      throw std::runtime_error("cannot open " + lexical_path.string());
    }
    check_header(in, kLexicalMagic, lexical_path);
    const auto n = binio::read_u64(in);
    index->chunks_.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
      corpus::Chunk c;
      c.chunk_id = binio::read_string(in);
      c.doc_id = binio::read_string(in);
      c.seq = binio::read_u64(in);
      c.start = binio::read_u64(in);
      c.end = binio::read_u64(in);
      c.text = binio::read_string(in);
      const auto category = binio::read_u32(in);
      if (category > static_cast<std::uint32_t>(corpus::Category::Other)) {
        throw std::runtime_error(lexical_path.string() + ": bad category value");
      }
      c.category = static_cast<corpus::Category>(category);
      const auto groups = binio::read_u64(in);
      for (std::uint64_t g = 0; g < groups; ++g) {
        c.access_groups.insert(binio::read_string(in));
      }
      index->chunks_.push_back(std::move(c));
    }
    index->lexical_ = Bm25Index::load(in);
    if (index->lexical_.size() != index->chunks_.size()) {
      throw std::runtime_error(lexical_path.string() + ": postings do not match chunk table");
    }
  }
  {
    std::ifstream in(vector_path, std::ios::binary);
    if (!in) {
      throw std::runtime_error("cannot open " + vector_path.string());
    }
    check_header(in, kVectorMagic, vector_path);
    const auto n = binio::read_u64(in);
    index->dimension_ = binio::read_u64(in);
    if (n != index->chunks_.size()) {
      throw std::runtime_error(vector_path.string() + ": vector count does not match chunk table");
    }
    index->vectors_.resize(n * index->dimension_);
    for (auto& f : index->vectors_) {
      f = std::bit_cast<float>(binio::read_u32(in));
    }
  }
  index->finish();
  return index;
}

}  // namespace ragsmith::retrieval
