#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include "oracles.hpp"
#include "ragsmith/gateway/stubs.hpp"
#include "ragsmith/retrieval/bm25.hpp"
#include "ragsmith/retrieval/chunk_index.hpp"
#include "ragsmith/retrieval/hybrid_retriever.hpp"
#include "ragsmith/retrieval/rrf.hpp"

using namespace ragsmith;
using namespace ragsmith::retrieval;

namespace {

corpus::Chunk make_chunk(std::string id, std::string text, corpus::GroupSet groups = {}) {
  corpus::Chunk c;
  c.chunk_id = std::move(id);
  c.doc_id = c.chunk_id.substr(0, c.chunk_id.find('#'));
  c.text = std::move(text);
  c.end = c.text.size();
  c.access_groups = std::move(groups);
  return c;
}

// Looks vectors up by exact text.
class TableEmbedder final : public gateway::Embedder {
 public:
  explicit TableEmbedder(std::map<std::string, std::vector<float>> table) : table_(std::move(table)) {}
  std::vector<std::vector<float>> embed(std::span<const std::string> texts) override {
    std::vector<std::vector<float>> out;
    for (const auto& t : texts) {
      out.push_back(table_.at(t));
    }
    return out;
  }

 private:
  std::map<std::string, std::vector<float>> table_;
};

class FailingEmbedder final : public gateway::Embedder {
 public:
  std::vector<std::vector<float>> embed(std::span<const std::string>) override {
    throw gateway::GatewayError("embedding service down", 3);
  }
};

const std::vector<std::string> kVocab{"clock", "timing", "slack", "route", "place", "netlist",
                                      "drc",   "lvs",    "power", "scan",  "cts",   "skew"};
const std::vector<std::string> kGroups{"a", "b", "c"};

}  // namespace

TEST_CASE("bm25 hand case") {
  Bm25Index idx;
  idx.add("alpha beta");
  idx.add("alpha");
  const auto hits = idx.search("beta", {}, 10);
  REQUIRE(hits.size() == 1);
  CHECK(hits[0].ordinal == 0);
  CHECK(hits[0].score == doctest::Approx(std::log(2.0) * 2.2 / 2.5).epsilon(1e-12));
  CHECK(hits[0].score == doctest::Approx(0.6100).epsilon(1e-4));
  CHECK(idx.search("gamma", {}, 10).empty());
  CHECK(idx.search("", {}, 10).empty());
}

TEST_CASE("bm25 filter excludes before scoring") {
  std::vector<corpus::Chunk> chunks{make_chunk("d1#00000", "alpha beta", {"secret"}), make_chunk("d2#00000", "alpha")};
  gateway::HashEmbedder emb(16);
  const auto index = ChunkIndex::build(chunks, emb);
  CHECK(index->bm25_search("beta", AccessFilter{}, 10).empty());
  const auto visible = index->bm25_search("beta", AccessFilter({"secret"}), 10);
  REQUIRE(visible.size() == 1);
  CHECK(visible[0].chunk_id == "d1#00000");
}

TEST_CASE("bm25 index round trips through a stream") {
  Bm25Index idx;
  idx.add("one two two three");
  idx.add("three four");
  std::stringstream ss;
  idx.save(ss);
  const auto copy = Bm25Index::load(ss);
  CHECK(copy.size() == 2);
  CHECK(copy.total_length() == idx.total_length());
  const auto a = idx.search("two three", {}, 5);
  const auto b = copy.search("two three", {}, 5);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].ordinal == b[i].ordinal);
    CHECK(a[i].score == b[i].score);
  }
}

TEST_CASE("rrf closed forms") {
  const std::vector<std::vector<std::string>> both{{"x", "y"}, {"x"}};
  const auto r = rrf_fuse(both, 60, 10);
  REQUIRE(r.entries.size() == 2);
  CHECK(r.entries[0].chunk_id == "x");
  CHECK(std::abs(r.entries[0].fused_score - 2.0 / 61.0) < 1e-12);
  CHECK(r.entries[0].lex_rank() == std::optional<std::size_t>(1));
  CHECK(r.entries[0].sem_rank() == std::optional<std::size_t>(1));
  CHECK(std::abs(r.entries[1].fused_score - 1.0 / 62.0) < 1e-12);
  CHECK_FALSE(r.entries[1].sem_rank().has_value());

  const std::vector<std::vector<std::string>> dup{{"x", "x"}};
  CHECK_THROWS_AS(rrf_fuse(dup, 60, 10), std::invalid_argument);
  CHECK_THROWS_AS(rrf_fuse(both, 0, 10), std::invalid_argument);
}

TEST_CASE("rrf ties break by id") {
  const std::vector<std::vector<std::string>> lists{{"b"}, {"a"}};
  const auto r = rrf_fuse(lists, 60, 10);
  REQUIRE(r.entries.size() == 2);
  CHECK(r.entries[0].chunk_id == "a");
  CHECK(r.entries[0].fused_score == r.entries[1].fused_score);
}

TEST_CASE("rrf matches brute force on random lists") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::string> pool;
    const auto n = 1 + rng() % 50;
    for (std::size_t i = 0; i < n; ++i) {
      pool.push_back("id" + std::to_string(i));
    }
    std::vector<std::vector<std::string>> lists(2);
    for (auto& l : lists) {
      auto p = pool;
      std::shuffle(p.begin(), p.end(), rng);
      p.resize(rng() % (n + 1));
      l = p;
    }
    const std::size_t top = 1 + rng() % 20;
    const auto got = rrf_fuse(lists, 60, top);
    const auto want = oracle::rrf(lists, 60, top);
    REQUIRE(got.entries.size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i) {
      CHECK(got.entries[i].chunk_id == want[i].id);
      CHECK(std::abs(got.entries[i].fused_score - want[i].score) < 1e-12);
    }
  }
}

TEST_CASE("rrf is monotone in rank") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> a{"p", "q", "r", "s", "t"};
    std::vector<std::string> b{"t", "s", "r", "q", "p"};
    std::shuffle(a.begin(), a.end(), rng);
    const auto before = rrf_fuse(std::vector<std::vector<std::string>>{a, b}, 60, 10);
    const auto pos = static_cast<std::size_t>(rng() % 4) + 1;
    const auto id = a[pos];
    std::swap(a[pos], a[pos - 1]);  // move `id` up one place
    const auto after = rrf_fuse(std::vector<std::vector<std::string>>{a, b}, 60, 10);
    auto score_of = [&](const RetrievalResult& r) {
      for (const auto& e : r.entries) {
        if (e.chunk_id == id) {
          return e.fused_score;
        }
      }
      return -1.0;
    };
    CHECK(score_of(after) >= score_of(before));
  }
}

TEST_CASE("vector search geometry") {
  const float h = static_cast<float>(1.0 / std::sqrt(2.0));
  TableEmbedder emb({{"x", {1.0f, 0.0f}}, {"y", {0.0f, 1.0f}}});
  const auto index = ChunkIndex::build({make_chunk("dx#00000", "x"), make_chunk("dy#00000", "y")}, emb);
  const std::vector<float> q{h, h};
  const auto hits = index->vector_search(q, AccessFilter{}, 10);
  REQUIRE(hits.size() == 2);
  CHECK(hits[0].score == doctest::Approx(0.7071).epsilon(1e-4));
  const std::vector<float> ex{1.0f, 0.0f};
  const auto exact = index->vector_search(ex, AccessFilter{}, 10);
  CHECK(exact[0].chunk_id == "dx#00000");
  CHECK(exact[0].score == doctest::Approx(1.0));
  CHECK(exact[1].score == doctest::Approx(0.0));
  const std::vector<float> bad{1.0f, 0.0f, 0.0f};
  CHECK_THROWS_AS(index->vector_search(bad, AccessFilter{}, 10), std::invalid_argument);
}

TEST_CASE("index build rejects duplicate chunk ids") {
  gateway::HashEmbedder emb(8);
  CHECK_THROWS(ChunkIndex::build({make_chunk("d#00000", "a"), make_chunk("d#00000", "b")}, emb));
}

TEST_CASE("index persists and reloads") {
  oracle::TempDir dir("index");
  std::mt19937_64 rng(3);
  gateway::HashEmbedder emb(32);
  const auto chunks = oracle::random_chunks(rng, 40, kVocab, kGroups);
  const auto index = ChunkIndex::build(chunks, emb);
  index->save(dir.path());
  const auto loaded = ChunkIndex::load(dir.path());
  REQUIRE(loaded->size() == index->size());
  CHECK(loaded->dimension() == 32);
  HybridRetriever a(index, std::make_shared<gateway::HashEmbedder>(32));
  HybridRetriever b(loaded, std::make_shared<gateway::HashEmbedder>(32));
  const AccessFilter f({"a"});
  const auto ra = a.search("clock skew timing", f, RetrievalConfig{});
  const auto rb = b.search("clock skew timing", f, RetrievalConfig{});
  REQUIRE(ra.entries.size() == rb.entries.size());
  for (std::size_t i = 0; i < ra.entries.size(); ++i) {
    CHECK(ra.entries[i].chunk_id == rb.entries[i].chunk_id);
    CHECK(ra.entries[i].fused_score == rb.entries[i].fused_score);
  }
  for (std::size_t i = 0; i < loaded->size(); ++i) {
    CHECK(loaded->chunk(static_cast<std::uint32_t>(i)) == index->chunk(static_cast<std::uint32_t>(i)));
  }

  std::ofstream(dir / "lexical.bin", std::ios::binary) << "JUNKJUNK";
  CHECK_THROWS(ChunkIndex::load(dir.path()));
}

TEST_CASE("hybrid search matches the brute-force pipeline") {
  std::mt19937_64 rng(99);
  const auto emb = std::make_shared<gateway::HashEmbedder>(24);
  for (int trial = 0; trial < 60; ++trial) {
    const auto chunks = oracle::random_chunks(rng, 1 + rng() % 60, kVocab, kGroups);
    const auto index = ChunkIndex::build(chunks, *emb);
    HybridRetriever retriever(index, emb);
    RetrievalConfig cfg;
    cfg.top_n = 1 + rng() % 10;
    cfg.candidate_depth = cfg.top_n + rng() % 20;
    corpus::GroupSet user;
    for (const auto& g : kGroups) {
      if (rng() % 2) {
        user.insert(g);
      }
    }
    std::string query = kVocab[rng() % kVocab.size()] + " " + kVocab[rng() % kVocab.size()];
    const auto got = retriever.search(query, AccessFilter(user), cfg);
    const auto want = oracle::hybrid(chunks, user, query, *emb, cfg.bm25_k1, cfg.bm25_b, cfg.candidate_depth,
                                     cfg.rrf_k, cfg.top_n);
    REQUIRE(got.entries.size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i) {
      CHECK(got.entries[i].chunk_id == want[i].id);
      CHECK(std::abs(got.entries[i].fused_score - want[i].score) < 1e-12);
    }
  }
}

TEST_CASE("filtered search equals search over the authorized sub-corpus") {
  std::mt19937_64 rng(1234);
  const auto emb = std::make_shared<gateway::HashEmbedder>(16);
  for (int trial = 0; trial < 40; ++trial) {
    const auto chunks = oracle::random_chunks(rng, 5 + rng() % 50, kVocab, kGroups);
    const corpus::GroupSet user{kGroups[rng() % kGroups.size()]};
    std::vector<corpus::Chunk> sub;
    for (const auto& c : chunks) {
      if (oracle::authorized(c.access_groups, user)) {
        sub.push_back(c);
      }
    }
    const std::string query = kVocab[rng() % kVocab.size()];
    HybridRetriever full(ChunkIndex::build(chunks, *emb), emb);
    HybridRetriever part(ChunkIndex::build(sub, *emb), emb);
    const auto a = full.search(query, AccessFilter(user), RetrievalConfig{});
    const auto b = part.search(query, AccessFilter::unrestricted(), RetrievalConfig{});
    REQUIRE(a.entries.size() == b.entries.size());
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
      CHECK(a.entries[i].chunk_id == b.entries[i].chunk_id);
      CHECK(a.entries[i].fused_score == b.entries[i].fused_score);
    }
  }
}

TEST_CASE("embedding failure degrades to lexical only") {
  gateway::HashEmbedder build_emb(8);
  const auto index =
      ChunkIndex::build({make_chunk("a#00000", "clock tree"), make_chunk("b#00000", "power grid")}, build_emb);
  HybridRetriever retriever(index, std::make_shared<FailingEmbedder>());
  const auto r = retriever.search("clock", AccessFilter{}, RetrievalConfig{});
  CHECK(r.degraded);
  CHECK_FALSE(r.degraded_reason.empty());
  REQUIRE(r.entries.size() == 1);
  CHECK(r.entries[0].chunk_id == "a#00000");
  CHECK(std::abs(r.entries[0].fused_score - 1.0 / 61.0) < 1e-12);
}

TEST_CASE("edge cases: blank query, nothing authorized, config validation") {
  const auto emb = std::make_shared<gateway::HashEmbedder>(8);
  const auto index = ChunkIndex::build({make_chunk("a#00000", "clock", {"g"})}, *emb);
  HybridRetriever retriever(index, emb);
  CHECK(retriever.search("   ", AccessFilter{}, RetrievalConfig{}).entries.empty());
  CHECK(retriever.search("clock", AccessFilter{}, RetrievalConfig{}).entries.empty());
  CHECK(retriever.search("clock", AccessFilter({"g"}), RetrievalConfig{}).entries.size() == 1);
  RetrievalConfig bad;
  bad.top_n = 200;
  CHECK_THROWS(bad.validate());
  bad = RetrievalConfig{};
  bad.rrf_k = 0;
  CHECK_THROWS(bad.validate());
}

TEST_CASE("access filter semantics") {
  CHECK(AccessFilter{}.authorizes({}));
  CHECK_FALSE(AccessFilter{}.authorizes({"x"}));
  CHECK(AccessFilter({"x", "y"}).authorizes({"y", "z"}));
  CHECK_FALSE(AccessFilter({"x"}).authorizes({"z"}));
  CHECK(AccessFilter::unrestricted().authorizes({"anything"}));
}

TEST_CASE("index swap is atomic for concurrent searches") {
  const auto emb = std::make_shared<gateway::HashEmbedder>(8);
  const auto first = ChunkIndex::build({make_chunk("a#00000", "clock")}, *emb);
  const auto second = ChunkIndex::build({make_chunk("b#00000", "clock"), make_chunk("c#00000", "clock")}, *emb);
  HybridRetriever retriever(first, emb);
  std::atomic<bool> stop{false};
  std::atomic<int> bad{0};
  std::vector<std::jthread> readers;
  for (int t = 0; t < 3; ++t) {
    readers.emplace_back([&] {
      while (!stop) {
        const auto n = retriever.search("clock", AccessFilter{}, RetrievalConfig{}).entries.size();
        if (n != 1 && n != 2) {
          ++bad;
        }
      }
    });
  }
  for (int i = 0; i < 200; ++i) {
    retriever.swap_index(i % 2 ? first : second);
  }
  stop = true;
  readers.clear();
  CHECK(bad == 0);
}
