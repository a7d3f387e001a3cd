#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "ragsmith/raft/example.hpp"

namespace ragsmith::raft {

inline constexpr const char* kTrainFile = "raft_train.jsonl";
inline constexpr const char* kTestFile = "raft_test.jsonl";
inline constexpr const char* kMissingContextFile = "raft_test_missing_context.jsonl";
inline constexpr const char* kManifestFile = "manifest.json";

void write_examples(const std::filesystem::path& path, const std::vector<RaftExample>& examples);
std::vector<RaftExample> read_examples(const std::filesystem::path& path);

/// Reference fine-tuning hyperparameters recorded in every manifest. The
/// build itself never trains anything.
nlohmann::ordered_json reference_hyperparameters();

}  // namespace ragsmith::raft
