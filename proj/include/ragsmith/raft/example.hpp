#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "ragsmith/corpus/types.hpp"

namespace ragsmith::raft {

enum class Split { Train, Test };

std::string_view to_string(Split split);
Split parse_split(std::string_view name);

/// One fully rendered prompt/label pair.
struct RaftExample {
  std::string example_id;
  std::string question;
  std::string prompt;
  std::string answer;
  std::vector<std::string> chunk_ids;  // fused order, as placed in the prompt
  std::optional<std::string> source_doc_id;
  std::optional<corpus::Category> category;
  Split split = Split::Train;
  bool missing_context = false;
  bool rafs_used = false;

  bool operator==(const RaftExample&) const = default;
};

nlohmann::ordered_json to_json(const RaftExample& ex);
RaftExample example_from_json(const nlohmann::json& j);

}  // namespace ragsmith::raft
