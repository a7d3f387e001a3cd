#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "ragsmith/eval/metrics.hpp"
#include "ragsmith/raft/example.hpp"

namespace ragsmith::eval {

/// Reads a prediction file (one {"example_id", "response"} object per line).
/// Throws on a duplicate example id.
std::map<std::string, std::string> read_predictions(const std::filesystem::path& path);

void write_predictions(const std::filesystem::path& path, const std::map<std::string, std::string>& predictions);

/// Pairs each example's answer with its prediction, in dataset order.
/// Throws std::runtime_error naming the first example without a prediction.
std::vector<EvalItem> join_predictions(const std::vector<raft::RaftExample>& dataset,
                                       const std::map<std::string, std::string>& predictions);

struct LeakageReport {
  std::string label;
  double recall_full = 0.0;
  double recall_missing_context = 0.0;
  double gap = 0.0;  // recall_full - recall_missing_context
  std::size_t idk_full = 0;
  std::size_t idk_missing_context = 0;
  std::size_t n_full = 0;
  std::size_t n_missing_context = 0;

  nlohmann::ordered_json to_json() const;
  /// Fixed-width table: one row with recall on both sets and IDK counts.
  std::string to_table() const;
};

LeakageReport leakage_report(const ScoreReport& full_set, const ScoreReport& missing_context_set,
                             std::string label = "model");

}  // namespace ragsmith::eval
