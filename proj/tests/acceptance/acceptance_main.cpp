// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Tolerances and sizes are pinned below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <spdlog/spdlog.h>

#include "oracles.hpp"
#include "ragsmith/common/jsonl.hpp"
#include "ragsmith/common/text.hpp"
#include "ragsmith/corpus/chunker.hpp"
#include "ragsmith/corpus/corpus_store.hpp"
#include "ragsmith/eval/metrics.hpp"
#include "ragsmith/eval/report.hpp"
#include "ragsmith/gateway/lexical_scorer.hpp"
#include "ragsmith/gateway/stubs.hpp"
#include "ragsmith/raft/builder.hpp"
#include "ragsmith/raft/dataset.hpp"
#include "ragsmith/raft/pipeline.hpp"
#include "ragsmith/raft/split.hpp"
#include "ragsmith/retrieval/bm25.hpp"
#include "ragsmith/retrieval/chunk_index.hpp"
#include "ragsmith/retrieval/hybrid_retriever.hpp"
#include "ragsmith/retrieval/rrf.hpp"
#include "ragsmith/service/assistant.hpp"
#include "ragsmith/service/offline_generator.hpp"
#include "ragsmith/synth/synthesizer.hpp"

using namespace ragsmith;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

// Pinned tolerances and sizes.
constexpr double kF1Expected = 0.42275;
constexpr double kF1ReportedPercent = 42.28;
constexpr double kF1TolerancePp = 0.005;
constexpr double kFloatSlack = 1e-9;  // 42.275 is a half-way case in binary
constexpr double kScoreTolerance = 1e-12;
constexpr double kBm25Hand = 0.6100;
constexpr double kBm25Tolerance = 1e-4;
constexpr double kRecallHand = 0.9217;
constexpr double kRecallTolerance = 1e-3;
constexpr std::size_t kChunkerDocs = 10000;
constexpr std::size_t kChunkerMaxLength = 50000;
constexpr std::size_t kRetrievalCorpora = 1000;
constexpr std::size_t kRetrievalMaxChunks = 200;
constexpr std::size_t kRedTeamCorpora = 500;
constexpr std::size_t kRedTeamQueriesPerCorpus = 20;
constexpr std::size_t kMetricPairs = 10000;
constexpr std::size_t kPurityRuns = 20;
constexpr double kSplitBudget = 1.0;
constexpr double kChunkerBudget = 30.0;
constexpr double kRedTeamBudget = 120.0;
constexpr double kEndToEndBudget = 60.0;

struct Outcome {
  bool pass = true;
  std::string detail;
  std::size_t failures = 0;
  std::string first_failure;

  void expect(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (failures++ == 0) {
        first_failure = what;
      }
    }
  }
};

struct Line {
  std::string name;
  bool pass;
};

std::vector<Line> g_lines;

bool run(const std::string& name, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out.pass = false;
    out.first_failure = std::string("exception: ") + e.what();
    out.failures = 1;
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (budget_s > 0 && secs >= budget_s) {
    out.pass = false;
    out.first_failure = "over time budget of " + std::to_string(budget_s) + " s";
  }
  std::string detail = out.detail;
  if (!out.pass) {
    detail += (detail.empty() ? "" : "; ") + std::to_string(out.failures) + " failure(s), first: " + out.first_failure;
  }
  std::printf("%s  %-34s %7.2fs  %s\n", out.pass ? "PASS" : "FAIL", name.c_str(), secs, detail.c_str());
  std::fflush(stdout);
  g_lines.push_back({name, out.pass});
  return out.pass;
}

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

// 1. Per-category split reproduction.
Outcome split_table() {
  Outcome o;
  using corpus::Category;
  const std::map<Category, std::size_t> counts{{Category::ParameterReference, 2},
                                               {Category::Timing, 27},
                                               {Category::DevOps, 263},
                                               {Category::DesignGuide, 328},
                                               {Category::CommandReference, 380}};
  const auto plan = raft::apportion_split(counts, 0.1, 1000);
  std::vector<std::size_t> got;
  for (const auto& [cat, n] : counts) {
    got.push_back(plan.per_category.at(cat).test);
    o.expect(plan.per_category.at(cat).train + plan.per_category.at(cat).test == n, "train+test != count");
  }
  const std::vector<std::size_t> want{1, 3, 26, 33, 37};
  o.expect(got == want, "test counts differ");
  o.expect(plan.total_test == 100, "sum != 100");
  o.detail = "test counts {" + std::to_string(got[0]) + "," + std::to_string(got[1]) + "," + std::to_string(got[2]) +
             "," + std::to_string(got[3]) + "," + std::to_string(got[4]) + "} sum " + std::to_string(plan.total_test);
  return o;
}

// 2. F1 consistency with the reported aggregate.
Outcome f1_consistency() {
  Outcome o;
  const double v = eval::f1(0.4105, 0.4350);
  o.expect(std::abs(v - kF1Expected) < 1e-12, "f1 != 0.42275");
  o.expect(std::abs(v * 100.0 - kF1ReportedPercent) <= kF1TolerancePp + kFloatSlack, "not within rounding of 42.28%");
  o.detail = "f1 = " + fmt("%.5f", v) + " (" + fmt("%.2f", v * 100.0 + kFloatSlack) + "%)";
  return o;
}

// 3. Chunk geometry on random documents.
Outcome chunker_properties() {
  Outcome o;
  const corpus::CorpusConfig cfg;
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<std::size_t> length(1, kChunkerMaxLength);
  const std::vector<std::string> glyphs{"a", "b", "c", " ", "\n", "x", "é", "ß", "€", "中", "z", "q"};
  std::size_t total_chunks = 0;
  for (std::size_t d = 0; d < kChunkerDocs; ++d) {
    const std::size_t n = length(rng);
    corpus::Document doc;
    doc.doc_id = "doc-" + std::to_string(d);
    std::vector<std::size_t> offsets;
    offsets.reserve(n + 1);
    doc.body.reserve(n * 2);
    for (std::size_t i = 0; i < n; ++i) {
      offsets.push_back(doc.body.size());
      const auto r = rng() % 100;
      doc.body += r < 92 ? glyphs[r % 6] : glyphs[6 + r % 6];
    }
    offsets.push_back(doc.body.size());

    const auto chunks = corpus::chunk_document(doc, cfg);
    const std::size_t expected = n <= cfg.chunk_size ? 1 : (n - cfg.overlap + cfg.stride() - 1) / cfg.stride();
    o.expect(chunks.size() == expected, "count formula, length " + std::to_string(n));
    o.expect(corpus::expected_chunk_count(n, cfg) == expected, "expected_chunk_count, length " + std::to_string(n));
    if (chunks.empty()) {
      continue;
    }
    total_chunks += chunks.size();
    o.expect(chunks.front().start == 0, "first chunk does not start at 0");
    o.expect(chunks.back().end == n, "last chunk does not reach the end");
    for (std::size_t i = 0; i < chunks.size(); ++i) {
      const auto& c = chunks[i];
      o.expect(c.seq == i, "seq");
      o.expect(c.start == i * cfg.stride(), "stride");
      o.expect(c.end == std::min(c.start + cfg.chunk_size, n), "window end");
      o.expect(c.text == doc.body.substr(offsets[c.start], offsets[c.end] - offsets[c.start]), "chunk text");
      if (i > 0) {
        o.expect(chunks[i - 1].end - c.start == cfg.overlap, "overlap != 200");
      }
    }
  }
  o.detail = std::to_string(kChunkerDocs) + " docs, " + std::to_string(total_chunks) + " chunks";
  return o;
}

// 4. Hybrid retrieval against the brute-force pipeline.
Outcome retrieval_oracle() {
  Outcome o;
  const std::vector<std::string> vocab{"clock", "timing", "slack", "route", "place", "netlist", "drc", "lvs",
                                       "power", "scan",   "cts",   "skew",  "hold",  "setup",   "via", "metal"};
  const std::vector<std::string> groups{"a", "b", "c", "d"};
  auto emb = std::make_shared<gateway::HashEmbedder>(32);
  std::mt19937_64 rng(7);
  std::size_t compared = 0;
  double worst = 0.0;
  for (std::size_t trial = 0; trial < kRetrievalCorpora; ++trial) {
    const auto chunks = oracle::random_chunks(rng, 1 + rng() % kRetrievalMaxChunks, vocab, groups);
    retrieval::HybridRetriever retriever(retrieval::ChunkIndex::build(chunks, *emb), emb);
    for (int q = 0; q < 3; ++q) {
      retrieval::RetrievalConfig cfg;
      cfg.top_n = 1 + rng() % 15;
      cfg.candidate_depth = cfg.top_n + rng() % 60;
      corpus::GroupSet user;
      for (const auto& g : groups) {
        if (rng() % 3 == 0) {
          user.insert(g);
        }
      }
      std::string query;
      const auto terms = 1 + rng() % 3;
      for (std::size_t t = 0; t < terms; ++t) {
        query += vocab[rng() % vocab.size()] + " ";
      }
      const auto got = retriever.search(query, retrieval::AccessFilter(user), cfg);
      const auto want = oracle::hybrid(chunks, user, query, *emb, cfg.bm25_k1, cfg.bm25_b, cfg.candidate_depth,
                                       cfg.rrf_k, cfg.top_n);
      o.expect(got.entries.size() == want.size(), "result length, trial " + std::to_string(trial));
      for (std::size_t i = 0; i < std::min(got.entries.size(), want.size()); ++i) {
        o.expect(got.entries[i].chunk_id == want[i].id, "order, trial " + std::to_string(trial));
        const double diff = std::abs(got.entries[i].fused_score - want[i].score);
        worst = std::max(worst, diff);
        o.expect(diff <= kScoreTolerance, "rrf score, trial " + std::to_string(trial));
      }
      ++compared;
    }
  }

  retrieval::Bm25Index bm25;
  bm25.add("alpha beta");
  bm25.add("alpha");
  const auto hits = bm25.search("beta", {}, 10);
  const double hand = hits.empty() ? 0.0 : hits.front().score;
  o.expect(hits.size() == 1 && std::abs(hand - kBm25Hand) <= kBm25Tolerance, "bm25 hand case");

  const std::vector<std::vector<std::string>> lists{{"x", "y"}, {"x", "z"}};
  const auto fused = retrieval::rrf_fuse(lists, 60.0, 10);
  const double top = fused.entries.empty() ? 0.0 : fused.entries.front().fused_score;
  o.expect(!fused.entries.empty() && fused.entries.front().chunk_id == "x" && std::abs(top - 2.0 / 61.0) <= 1e-12,
           "rrf double rank-1 case");

  o.detail = std::to_string(kRetrievalCorpora) + " corpora, " + std::to_string(compared) +
             " queries, max |dscore| " + fmt("%.1e", worst) + ", bm25 " + fmt("%.4f", hand) + ", rrf " +
             fmt("%.12f", top);
  return o;
}

// 5. No unauthorized chunk reaches a response or a prompt.
Outcome red_team() {
  Outcome o;
  const std::vector<std::string> vocab{"clock", "timing", "slack", "route", "power", "scan", "skew", "hold"};
  const std::vector<std::string> groups{"hw", "sw", "fin", "legal", "ops"};
  auto emb = std::make_shared<gateway::HashEmbedder>(32);
  std::mt19937_64 rng(4242);
  std::size_t trials = 0;
  std::size_t restricted_seen = 0;

  std::string captured;
  auto echo = std::make_shared<gateway::FunctionGenerator>([&captured](const gateway::GenerationRequest& r) {
    captured = r.prompt;
    return r.prompt;
  });

  for (std::size_t corpus_no = 0; corpus_no < kRedTeamCorpora; ++corpus_no) {
    const std::size_t n = 2 + rng() % 60;
    std::vector<corpus::Chunk> chunks;
    std::vector<corpus::Document> docs;
    std::vector<std::string> handles;
    std::vector<std::string> secrets;
    for (std::size_t i = 0; i < n; ++i) {
      char handle[32];
      char secret[32];
      std::snprintf(handle, sizeof(handle), "hq%04zux%04zu", corpus_no, i);
      std::snprintf(secret, sizeof(secret), "zq%04zux%04zu", corpus_no, i);
      corpus::Chunk c;
      c.doc_id = "doc-" + std::to_string(i);
      c.chunk_id = c.doc_id + "#00000";
      c.text = std::string(handle) + " " + vocab[rng() % vocab.size()] + " " + vocab[rng() % vocab.size()] +
               " secret " + secret;
      c.end = c.text.size();
      const auto g = rng() % 4;  // 0: public, else 1..3 groups
      for (std::size_t k = 0; k < g; ++k) {
        c.access_groups.insert(groups[rng() % groups.size()]);
      }
      corpus::Document d;
      d.doc_id = c.doc_id;
      d.title = c.doc_id;
      d.access_groups = c.access_groups;
      docs.push_back(d);
      handles.emplace_back(handle);
      secrets.emplace_back(secret);
      chunks.push_back(std::move(c));
    }
    std::map<std::string, corpus::GroupSet> directory;
    for (int u = 0; u < 6; ++u) {
      corpus::GroupSet gs;
      for (const auto& g : groups) {
        if (rng() % 4 == 0) {
          gs.insert(g);
        }
      }
      directory["user" + std::to_string(u)] = gs;
    }
    auto retriever =
        std::make_shared<retrieval::HybridRetriever>(retrieval::ChunkIndex::build(chunks, *emb), emb);
    corpus::HistoryStore history;
    service::AssistantOptions opts;
    opts.retrieval.top_n = 1 + rng() % 10;
    service::AssistantService svc(retriever, echo, service::UserDirectory(directory), history,
                                  prompts::PromptTemplates::builtin(), docs, opts);

    for (std::size_t q = 0; q < kRedTeamQueriesPerCorpus; ++q) {
      const auto u = rng() % 8;  // user6 and user7 are unknown
      const std::string user = "user" + std::to_string(u);
      const corpus::GroupSet user_groups = directory.count(user) ? directory[user] : corpus::GroupSet{};
      std::string query;
      const auto probes = 1 + rng() % 3;
      for (std::size_t p = 0; p < probes; ++p) {
        query += handles[rng() % n] + " ";
      }
      query += vocab[rng() % vocab.size()];
      captured.clear();
      const auto r = svc.handle_query(user, query);
      ++trials;
      for (const auto& p : r.provenance) {
        o.expect(oracle::authorized(p.access_groups, user_groups), "unauthorized chunk in provenance");
      }
      for (std::size_t i = 0; i < n; ++i) {
        if (oracle::authorized(chunks[i].access_groups, user_groups)) {
          continue;
        }
        ++restricted_seen;
        o.expect(captured.find(secrets[i]) == std::string::npos, "restricted text in prompt");
        o.expect(r.answer.find(secrets[i]) == std::string::npos, "restricted text in response");
        o.expect(svc.last_prompt().find(secrets[i]) == std::string::npos, "restricted text in last prompt");
      }
    }
  }
  o.expect(trials >= 10000, "fewer than 10000 trials");
  o.detail = std::to_string(trials) + " trials, " + std::to_string(restricted_seen) +
             " (trial, restricted chunk) checks, 0 tolerated";
  return o;
}

struct RaftFixture {
  std::shared_ptr<gateway::HashEmbedder> embedder = std::make_shared<gateway::HashEmbedder>(32);
  std::shared_ptr<retrieval::HybridRetriever> retriever;
  std::vector<corpus::Document> docs;

  RaftFixture(std::size_t n_docs, std::uint64_t seed) {
    const std::vector<std::string> topics{"clock", "timing", "slack", "route", "placement", "power", "scan", "drc"};
    std::mt19937_64 rng(seed);
    corpus::CorpusConfig cfg;
    cfg.chunk_size = 80;
    cfg.overlap = 10;
    std::vector<corpus::Chunk> chunks;
    for (std::size_t i = 0; i < n_docs; ++i) {
      corpus::Document d;
      d.doc_id = "doc-" + std::to_string(10000 + i);
      d.title = d.doc_id;
      const auto words = 10 + rng() % 60;
      for (std::size_t w = 0; w < words; ++w) {
        d.body += topics[rng() % topics.size()] + " ";
      }
      d.body += "marker" + std::to_string(i);
      for (auto& c : corpus::chunk_document(d, cfg)) {
        chunks.push_back(std::move(c));
      }
      docs.push_back(std::move(d));
    }
    retriever =
        std::make_shared<retrieval::HybridRetriever>(retrieval::ChunkIndex::build(chunks, *embedder), embedder);
  }
};

// 6. Missing-context purity and IDK augmentation.
Outcome missing_context_purity() {
  Outcome o;
  using corpus::Category;
  std::size_t mc_checked = 0;
  for (std::uint64_t run_no = 1; run_no <= kPurityRuns; ++run_no) {
    std::mt19937_64 rng(run_no * 7919);
    RaftFixture fx(20 + rng() % 40, run_no);
    std::vector<synth::QAPair> pairs;
    for (std::size_t i = 0; i < fx.docs.size(); ++i) {
      const auto& d = fx.docs[i];
      pairs.push_back({"syn-" + d.doc_id, "what about " + d.body.substr(0, 30), "answer " + d.doc_id,
                       synth::Provenance::Synthetic, d.doc_id, static_cast<Category>(i % 2)});
    }
    raft::RaftPipelineOptions opts;
    opts.seed = rng();
    opts.idk.seed = rng();
    opts.mc_test_count = 5 + rng() % 10;
    raft::RaftBuildOptions bopts;
    bopts.retrieval.top_n = 1 + rng() % 10;
    raft::RaftBuilder builder(*fx.retriever, prompts::PromptTemplates::builtin(), bopts);
    const auto data = raft::build_raft_datasets(pairs, {}, builder, opts);
    std::vector<const raft::RaftExample*> mc_like;
    for (const auto& ex : data.test_missing_context) {
      mc_like.push_back(&ex);
    }
    for (const auto& ex : data.train) {
      if (ex.missing_context) {
        mc_like.push_back(&ex);
      }
    }
    for (const auto* ex : mc_like) {
      ++mc_checked;
      o.expect(ex->missing_context, "flag not set");
      o.expect(ex->source_doc_id.has_value(), "no source doc");
      for (const auto& id : ex->chunk_ids) {
        o.expect(builder.index().find(id)->doc_id != *ex->source_doc_id, "chunk from the source document");
      }
      for (const auto& c : builder.index().chunks()) {
        if (c.doc_id == *ex->source_doc_id) {
          o.expect(ex->prompt.find("]\n" + c.text + "\n\n") == std::string::npos, "source passage in prompt");
        }
      }
    }
  }

  // 1000 synthetic pairs with the per-category counts above: 100 test, 900
  // train, so a 0.10 fraction must add exactly 90 IDK copies.
  RaftFixture fx(200, 99);
  const std::vector<std::pair<Category, std::size_t>> counts{{Category::ParameterReference, 2},
                                                             {Category::Timing, 27},
                                                             {Category::DevOps, 263},
                                                             {Category::DesignGuide, 328},
                                                             {Category::CommandReference, 380}};
  std::vector<synth::QAPair> pairs;
  std::size_t k = 0;
  for (const auto& [cat, n] : counts) {
    for (std::size_t i = 0; i < n; ++i, ++k) {
      const auto& d = fx.docs[k % fx.docs.size()];
      char id[32];
      std::snprintf(id, sizeof(id), "syn-%04zu", k);
      pairs.push_back({id, "question " + std::to_string(k) + " " + d.body.substr(0, 24), "answer " + std::to_string(k),
                       synth::Provenance::Synthetic, d.doc_id, cat});
    }
  }
  raft::RaftPipelineOptions opts;
  opts.idk.fraction = 0.10;
  opts.mc_test_count = 100;
  raft::RaftBuilder builder(*fx.retriever, prompts::PromptTemplates::builtin());
  const auto data = raft::build_raft_datasets(pairs, {}, builder, opts);
  std::set<std::string> test_ids;
  for (const auto& ex : data.test) {
    test_ids.insert(ex.example_id);
  }
  std::size_t base_train = 0;
  std::size_t idk = 0;
  for (const auto& ex : data.train) {
    if (!ex.example_id.ends_with("-idk")) {
      ++base_train;
      continue;
    }
    ++idk;
    o.expect(ex.missing_context, "idk copy without missing_context");
    o.expect(ex.answer == raft::kDefaultIdkLabel, "idk label");
    const auto base = ex.example_id.substr(0, ex.example_id.size() - 4);
    o.expect(!test_ids.count(base), "idk copy derived from test");
    for (const auto& id : ex.chunk_ids) {
      o.expect(builder.index().find(id)->doc_id != *ex.source_doc_id, "idk copy keeps source chunk");
    }
  }
  o.expect(data.test.size() == 100, "test size != 100");
  o.expect(base_train == 900, "train size != 900");
  o.expect(idk == 90 && data.idk_added == 90, "idk copies != 90");

  // Direct augmentation of a 900-example train set.
  std::vector<raft::RaftExample> train;
  for (const auto& ex : data.train) {
    if (!ex.example_id.ends_with("-idk")) {
      train.push_back(ex);
    }
  }
  raft::IdkPolicy policy;
  policy.fraction = 0.10;
  const auto augmented = builder.augment_with_idk(train, policy);
  std::size_t appended = 0;
  for (std::size_t i = train.size(); i < augmented.size(); ++i) {
    ++appended;
    o.expect(augmented[i].missing_context && augmented[i].split == raft::Split::Train, "appended example flags");
  }
  o.expect(appended == 90, "direct augmentation != 90");
  o.detail = std::to_string(kPurityRuns) + " runs, " + std::to_string(mc_checked) +
             " missing-context examples clean; 900 train -> " + std::to_string(appended) + " idk";
  return o;
}

std::string random_sentence(std::mt19937_64& rng) {
  static const std::vector<std::string> words{"the", "cat", "clock", "skew", "set", "period", "2ns", "route",
                                              "!",   "?",   "a",     "of",   "é",   "net",    "via", "x"};
  std::string s;
  const auto n = rng() % 12;
  for (std::size_t i = 0; i < n; ++i) {
    s += words[rng() % words.size()] + (rng() % 5 == 0 ? "" : " ");
  }
  return s;
}

// 7. Metric identities under the lexical oracle scorer.
Outcome metric_identities() {
  Outcome o;
  gateway::LexicalOracleScorer scorer;
  const eval::MetricConfig cfg;
  std::mt19937_64 rng(31337);
  std::size_t identities = 0;
  for (int i = 0; i < 1000; ++i) {
    auto ref = random_sentence(rng);
    if (text::is_blank(ref)) {
      continue;
    }
    const auto s = eval::score_sample({"id", ref, ref}, scorer, cfg);
    o.expect(s.precision == 1.0 && s.recall == 1.0 && s.f1 == 1.0, "identity not exactly 1");
    ++identities;
  }
  eval::MetricConfig bare;
  bare.rephrase_prompts = {""};
  const double recall = eval::normalized_recall("the cat", "the", scorer, bare).value;
  o.expect(std::abs(recall - kRecallHand) <= kRecallTolerance, "derived recall case");

  std::size_t pairs = 0;
  while (pairs < kMetricPairs) {
    const auto ref = random_sentence(rng);
    if (text::is_blank(ref)) {
      continue;
    }
    const auto pred = random_sentence(rng);
    const auto s = eval::score_sample({"id", ref, pred}, scorer, cfg);
    for (double v : {s.precision, s.recall, s.f1}) {
      o.expect(v >= 0.0 && v <= 1.0, "score outside [0,1]");
    }
    ++pairs;
  }
  o.detail = std::to_string(identities) + " identities, recall(\"the cat\",\"the\") = " + fmt("%.4f", recall) + ", " +
             std::to_string(pairs) + " random pairs in [0,1]";
  return o;
}

// 8. Desk-scale pipeline with stub models; returns the emitted bytes.
struct PipelineRun {
  std::map<std::string, std::string> files;
  eval::ScoreReport full;
  eval::ScoreReport mc;
  eval::LeakageReport leakage;
  std::size_t pairs = 0;
  std::size_t rafs_pairs = 0;
  std::size_t docs = 0;
  std::size_t idk = 0;
};

PipelineRun run_pipeline(const fs::path& docs_dir, const fs::path& work) {
  PipelineRun out;
  corpus::IngestRules rules;
  rules.category_patterns = {{"*/timing/*", corpus::Category::Timing},
                             {"*/commands/*", corpus::Category::CommandReference}};
  rules.group_patterns = {{"*/commands/c3.txt", {"hw"}}};
  corpus::CorpusStore store(work / "corpus");
  const corpus::CorpusConfig ccfg;
  const std::vector<fs::path> paths{docs_dir};
  const auto stats = store.ingest(paths, rules, ccfg);
  out.docs = stats.docs_kept;

  const std::vector<std::string> questions{
      "How do I define a clock?",        "What is hold slack?",         "How do I run routing?",
      "Which command reports timing?",   "How to fix setup violations?", "What does scan insertion do?",
      "How is skew measured?",           "Where is the netlist written?", "How do I set a false path?",
      "What does the via option change?"};
  for (const auto& q : questions) {
    corpus::HistoryEntry e;
    e.question = q;
    e.response = "see the docs";
    e.timestamp = "2026-01-01T00:00:00Z";
    store.history().append(e);
  }

  auto generator = service::make_offline_generator();
  const auto templates = prompts::PromptTemplates::builtin();
  auto docs = synth::sample_source_documents(store.documents(), ccfg, 20, 17);
  std::vector<corpus::Document> plain(docs.begin(), docs.begin() + 15);
  std::vector<corpus::Document> with_rafs(docs.begin() + 15, docs.end());
  synth::SynthConfig scfg;
  const auto history = store.history().all();
  auto pairs = synth::run_synthesis(plain, history, scfg, *generator, templates, 4).pairs;
  scfg.use_rafs = true;
  for (auto& p : synth::run_synthesis(with_rafs, history, scfg, *generator, templates, 4).pairs) {
    pairs.push_back(std::move(p));
  }
  out.pairs = pairs.size();
  for (const auto& p : pairs) {
    out.rafs_pairs += p.provenance == synth::Provenance::SyntheticRafs ? 1 : 0;
  }
  synth::write_qa_file(work / "synth/qa.jsonl", pairs);

  auto embedder = std::make_shared<gateway::HashEmbedder>(64);
  auto index = retrieval::ChunkIndex::build(store.chunks(), *embedder);
  index->save(work / "index");
  retrieval::HybridRetriever retriever(retrieval::ChunkIndex::load(work / "index"), embedder);
  raft::RaftBuildOptions bopts;
  bopts.retrieval.top_n = 5;
  raft::RaftBuilder builder(retriever, templates, bopts);
  raft::RaftPipelineOptions popts;
  popts.idk.fraction = 0.10;
  popts.mc_test_count = 5;
  const auto data = raft::build_raft_datasets(synth::read_qa_file(work / "synth/qa.jsonl"), {}, builder, popts);
  out.idk = data.idk_added;
  raft::emit_dataset(work / "datasets", data, raft::make_manifest(data, builder, popts));

  auto predict = [&](const std::vector<raft::RaftExample>& set) {
    std::map<std::string, std::string> preds;
    for (const auto& ex : set) {
      gateway::GenerationRequest req;
      req.prompt = ex.prompt;
      preds[ex.example_id] = generator->generate(req);
    }
    return preds;
  };
  eval::write_predictions(work / "eval/full.preds.jsonl", predict(data.test));
  eval::write_predictions(work / "eval/mc.preds.jsonl", predict(data.test_missing_context));
  gateway::LexicalOracleScorer scorer;
  out.full = eval::score_predictions(
      eval::join_predictions(raft::read_examples(work / "datasets" / raft::kTestFile),
                             eval::read_predictions(work / "eval/full.preds.jsonl")),
      scorer);
  out.mc = eval::score_predictions(
      eval::join_predictions(raft::read_examples(work / "datasets" / raft::kMissingContextFile),
                             eval::read_predictions(work / "eval/mc.preds.jsonl")),
      scorer);
  out.leakage = eval::leakage_report(out.full, out.mc, "stub");
  for (const char* f : {raft::kTrainFile, raft::kTestFile, raft::kMissingContextFile, raft::kManifestFile}) {
    out.files[f] = jsonl::read_text(work / "datasets" / f);
  }
  out.files["full.preds.jsonl"] = jsonl::read_text(work / "eval/full.preds.jsonl");
  return out;
}

Outcome end_to_end() {
  Outcome o;
  oracle::TempDir tmp("accept-e2e");
  const std::vector<std::string> topics{"clock", "skew", "route", "netlist", "timing", "scan", "power", "via"};
  std::mt19937_64 rng(2026);
  for (int i = 0; i < 20; ++i) {
    const bool timing = i % 2 == 0;
    std::string body = (timing ? "Timing guide " : "Command reference ") + std::to_string(i) + "\n\n";
    while (body.size() < 1200 + (rng() % 3000)) {
      body += "The " + topics[rng() % topics.size()] + " option " + std::to_string(rng() % 100) + " controls the " +
              topics[rng() % topics.size()] + " step. ";
    }
    const fs::path path = tmp / ((timing ? "docs/timing/t" : "docs/commands/c") + std::to_string(i) + ".txt");
    fs::create_directories(path.parent_path());
    std::ofstream(path) << body;
  }

  const auto a = run_pipeline(tmp / "docs", tmp / "run-a");
  const auto b = run_pipeline(tmp / "docs", tmp / "run-b");

  o.expect(a.docs == 20, "docs ingested != 20");
  o.expect(a.pairs == 20, "qa pairs != 20");
  o.expect(a.rafs_pairs == 5, "rafs pairs != 5");
  o.expect(a.idk == 1, "idk copies != floor(0.1 * 18)");
  for (const auto& [name, bytes] : a.files) {
    o.expect(!bytes.empty() || name == raft::kMissingContextFile, name + " empty");
    o.expect(b.files.at(name) == bytes, name + " differs between runs");
  }
  o.expect(a.full.n > 0 && a.full.samples.size() == a.full.n, "incomplete full report");
  o.expect(a.mc.n == 5 && a.mc.samples.size() == 5, "incomplete missing-context report");
  for (const auto* r : {&a.full, &a.mc}) {
    for (double v : {r->mean_precision, r->mean_recall, r->mean_f1}) {
      o.expect(v >= 0.0 && v <= 1.0, "mean outside [0,1]");
    }
    const auto j = r->to_json();
    for (const char* key : {"n", "mean_precision", "mean_recall", "mean_f1", "idk_count", "samples"}) {
      o.expect(j.contains(key), std::string("report missing ") + key);
    }
  }
  o.expect(std::abs(a.leakage.gap - (a.leakage.recall_full - a.leakage.recall_missing_context)) < 1e-12,
           "leakage gap");
  o.expect(a.leakage.n_full == a.full.n && a.leakage.n_missing_context == a.mc.n, "leakage counts");
  o.detail = "20 docs, 20 pairs (5 rafs), idk " + std::to_string(a.idk) + ", " + std::to_string(a.files.size()) +
             " files byte-identical, recall full " + fmt("%.3f", a.leakage.recall_full) + " / mc " +
             fmt("%.3f", a.leakage.recall_missing_context);
  return o;
}

}  // namespace

int main() {
  spdlog::set_level(spdlog::level::err);
  std::printf("acceptance criteria\n");
  run("split-table-reproduction", kSplitBudget, split_table);
  run("f1-consistency", 0, f1_consistency);
  run("chunker-properties", kChunkerBudget, chunker_properties);
  run("retrieval-oracle-equivalence", 0, retrieval_oracle);
  run("zero-leak-red-team", kRedTeamBudget, red_team);
  run("missing-context-purity", 0, missing_context_purity);
  run("metric-identities", 0, metric_identities);
  run("end-to-end-stub-pipeline", kEndToEndBudget, end_to_end);

  bool substitutes = true;
  for (const auto& l : g_lines) {
    if (l.name != "split-table-reproduction" && l.name != "f1-consistency") {
      substitutes = substitutes && l.pass;
    }
  }
  run("model-quality-not-reproducible", 0, [substitutes] {
    Outcome o;
    o.expect(substitutes, "a substitute property suite failed");
    o.detail = "absolute model-quality numbers need proprietary data and fine-tuning; covered by the suites above";
    return o;
  });

  std::size_t failed = 0;
  for (const auto& l : g_lines) {
    failed += l.pass ? 0 : 1;
  }
  std::printf("%zu/%zu criteria passed\n", g_lines.size() - failed, g_lines.size());
  return failed == 0 ? 0 : 1;
}
