#include "ragsmith/raft/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

#include <spdlog/spdlog.h>

#include "ragsmith/common/jsonl.hpp"
#include "ragsmith/common/parallel.hpp"
#include "ragsmith/raft/dataset.hpp"

namespace ragsmith::raft {
namespace {

struct Job {
  const synth::QAPair* qa;
  Split split;
};

std::vector<RaftExample> render_all(const std::vector<Job>& jobs, const RaftBuilder& builder, std::size_t workers) {
  std::vector<RaftExample> out(jobs.size());
  parallel_for(jobs.size(), workers, [&](std::size_t i) { out[i] = builder.build(*jobs[i].qa, jobs[i].split); });
  return out;
}

void sort_by_id(std::vector<RaftExample>& v) {
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.example_id < b.example_id; });
}

}  // namespace

RaftDatasets build_raft_datasets(std::span<const synth::QAPair> synthetic, std::span<const synth::QAPair> q2a,
                                 const RaftBuilder& builder, const RaftPipelineOptions& options) {
  RaftDatasets data;
  std::mt19937_64 rng(options.seed);
  std::vector<Job> jobs;

  // Synthetic pairs: per-category apportionment.
  std::map<corpus::Category, std::vector<const synth::QAPair*>> by_category;
  for (const auto& qa : synthetic) {
    by_category[qa.category.value_or(corpus::Category::Other)].push_back(&qa);
  }
  if (!synthetic.empty()) {
    std::map<corpus::Category, std::size_t> counts;
    for (const auto& [category, pairs] : by_category) {
      counts[category] = pairs.size();
    }
    data.synthetic_plan = apportion_split(counts, options.test_fraction, synthetic.size());
    for (auto& [category, pairs] : by_category) {
      std::sort(pairs.begin(), pairs.end(), [](auto* a, auto* b) { return a->qa_id < b->qa_id; });
      std::shuffle(pairs.begin(), pairs.end(), rng);
      const auto n_test = data.synthetic_plan.per_category.at(category).test;
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        jobs.push_back({pairs[i], i < n_test ? Split::Test : Split::Train});
      }
    }
  }
  const auto synthetic_jobs = jobs.size();

  // Forum pairs: uniform split.
  std::vector<const synth::QAPair*> forum;
  for (const auto& qa : q2a) {
    forum.push_back(&qa);
  }
  std::sort(forum.begin(), forum.end(), [](auto* a, auto* b) { return a->qa_id < b->qa_id; });
  std::shuffle(forum.begin(), forum.end(), rng);
  data.q2a_test = static_cast<std::size_t>(std::llround(options.q2a_test_fraction * static_cast<double>(forum.size())));
  data.q2a_train = forum.size() - data.q2a_test;
  for (std::size_t i = 0; i < forum.size(); ++i) {
    jobs.push_back({forum[i], i < data.q2a_test ? Split::Test : Split::Train});
  }

  auto rendered = render_all(jobs, builder, options.workers);

  std::vector<RaftExample> synth_train;
  for (std::size_t i = 0; i < rendered.size(); ++i) {
    auto& ex = rendered[i];
    if (ex.split == Split::Test) {
      data.test.push_back(std::move(ex));
    } else if (i < synthetic_jobs) {
      synth_train.push_back(std::move(ex));
    } else {
      data.train.push_back(std::move(ex));
    }
  }
  sort_by_id(synth_train);

  // Missing-context test set, sampled from synthetic train examples.
  const auto needed_idk = idk_count(options.idk.fraction, synth_train.size());
  auto mc_count = std::min(options.mc_test_count, synth_train.size());
  if (mc_count + needed_idk > synth_train.size()) {
    mc_count = synth_train.size() - std::min(needed_idk, synth_train.size());
    spdlog::warn("missing-context test set reduced to {} examples to leave room for {} IDK copies", mc_count,
                 needed_idk);
  }
  std::vector<std::size_t> order(synth_train.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    order[i] = i;
  }
  std::shuffle(order.begin(), order.end(), rng);
  order.resize(mc_count);
  std::sort(order.begin(), order.end());
  std::set<std::string> mc_sources;
  for (auto i : order) {
    auto mc = builder.make_missing_context(synth_train[i]);
    mc_sources.insert(mc.example_id);
    mc.example_id += "-mc";
    mc.split = Split::Test;
    data.test_missing_context.push_back(std::move(mc));
  }

  const auto before = synth_train.size();
  synth_train = builder.augment_with_idk(std::move(synth_train), options.idk, mc_sources);
  data.idk_added = synth_train.size() - before;

  for (auto& ex : synth_train) {
    data.train.push_back(std::move(ex));
  }
  sort_by_id(data.train);
  sort_by_id(data.test);
  sort_by_id(data.test_missing_context);
  return data;
}

nlohmann::ordered_json make_manifest(const RaftDatasets& data, const RaftBuilder& builder,
                                     const RaftPipelineOptions& options) {
  const auto& opts = builder.options();
  nlohmann::ordered_json filter;
  if (opts.filter.is_unrestricted()) {
    filter = "unrestricted";
  } else {
    filter = opts.filter.user_groups();
  }
  nlohmann::ordered_json manifest;
  manifest["format_version"] = 1;
  manifest["template_version"] = builder.templates().version();
  manifest["retrieval"] = {{"top_n", opts.retrieval.top_n},
                           {"rrf_k", opts.retrieval.rrf_k},
                           {"candidate_depth", opts.retrieval.candidate_depth},
                           {"bm25_k1", opts.retrieval.bm25_k1},
                           {"bm25_b", opts.retrieval.bm25_b},
                           {"max_prompt_chars", opts.max_prompt_chars},
                           {"access_filter", filter},
                           {"index_chunks", builder.index().size()},
                           {"embedding_dim", builder.index().dimension()}};
  manifest["split"] = {{"seed", options.seed},
                       {"test_fraction", options.test_fraction},
                       {"q2a_test_fraction", options.q2a_test_fraction},
                       {"synthetic", data.synthetic_plan.to_json()},
                       {"q2a", {{"train", data.q2a_train}, {"test", data.q2a_test}}}};
  manifest["idk_policy"] = {{"fraction", options.idk.fraction},
                            {"label", options.idk.idk_label},
                            {"seed", options.idk.seed},
                            {"added", data.idk_added}};
  manifest["counts"] = {{"train", data.train.size()},
                        {"test", data.test.size()},
                        {"test_missing_context", data.test_missing_context.size()}};
  manifest["hyperparameters"] = reference_hyperparameters();
  return manifest;
}

void emit_dataset(const std::filesystem::path& out_dir, const RaftDatasets& data,
                  const nlohmann::ordered_json& manifest) {
  std::filesystem::create_directories(out_dir);
  write_examples(out_dir / kTrainFile, data.train);
  write_examples(out_dir / kTestFile, data.test);
  write_examples(out_dir / kMissingContextFile, data.test_missing_context);
  jsonl::write_text_atomically(out_dir / kManifestFile, manifest.dump(2) + "\n");
}

}  // namespace ragsmith::raft
