#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "json.hpp"

#include "ragsmith/raft/builder.hpp"
#include "ragsmith/raft/split.hpp"

namespace ragsmith::raft {

struct RaftPipelineOptions {
  double test_fraction = 0.1;      // synthetic pairs, apportioned per category
  double q2a_test_fraction = 0.1;  // forum pairs, uniform
  std::size_t mc_test_count = 100;
  IdkPolicy idk;
  std::uint64_t seed = 17;
  std::size_t workers = 4;
};

struct RaftDatasets {
  std::vector<RaftExample> train;
  std::vector<RaftExample> test;
  std::vector<RaftExample> test_missing_context;
  SplitPlan synthetic_plan;
  std::size_t q2a_train = 0;
  std::size_t q2a_test = 0;
  std::size_t idk_added = 0;
};

/// Splits the QA pairs, renders every example and derives the
/// missing-context test set and the IDK copies.
///
/// Synthetic pairs are split per category with apportion_split (pairs
/// without a category count as Other). The missing-context test set is
/// drawn from synthetic train examples; those examples are excluded from
/// IDK selection. When mc_test_count would leave too few candidates for the
/// IDK copies it is reduced accordingly.
RaftDatasets build_raft_datasets(std::span<const synth::QAPair> synthetic, std::span<const synth::QAPair> q2a,
                                 const RaftBuilder& builder, const RaftPipelineOptions& options);

/// Everything needed to rebuild the datasets, with no timestamps so that
/// identical inputs give identical bytes.
nlohmann::ordered_json make_manifest(const RaftDatasets& data, const RaftBuilder& builder,
                                     const RaftPipelineOptions& options);

/// Writes raft_train.jsonl, raft_test.jsonl, raft_test_missing_context.jsonl
/// and manifest.json into `out_dir`.
void emit_dataset(const std::filesystem::path& out_dir, const RaftDatasets& data,
                  const nlohmann::ordered_json& manifest);

}  // namespace ragsmith::raft
