#include "ragsmith/raft/dataset.hpp"

#include <stdexcept>

#include "ragsmith/common/jsonl.hpp"

namespace ragsmith::raft {

std::string_view to_string(Split split) { return split == Split::Train ? "train" : "test"; }

Split parse_split(std::string_view name) {
  if (name == "train") {
    return Split::Train;
  }
  if (name == "test") {
    return Split::Test;
  }
  throw std::runtime_error("unknown split `" + std::string(name) + "`");
}

nlohmann::ordered_json to_json(const RaftExample& ex) {
  nlohmann::ordered_json j{{"example_id", ex.example_id},
                           {"question", ex.question},
                           {"prompt", ex.prompt},
                           {"answer", ex.answer},
                           {"chunk_ids", ex.chunk_ids}};
  j["source_doc_id"] = ex.source_doc_id ? nlohmann::ordered_json(*ex.source_doc_id) : nlohmann::ordered_json();
  j["category"] = ex.category ? nlohmann::ordered_json(corpus::to_string(*ex.category)) : nlohmann::ordered_json();
  j["split"] = to_string(ex.split);
  j["missing_context"] = ex.missing_context;
  j["rafs_used"] = ex.rafs_used;
  return j;
}

RaftExample example_from_json(const nlohmann::json& j) {
  RaftExample ex;
  ex.example_id = j.at("example_id").get<std::string>();
  ex.question = j.at("question").get<std::string>();
  ex.prompt = j.at("prompt").get<std::string>();
  ex.answer = j.at("answer").get<std::string>();
  ex.chunk_ids = j.at("chunk_ids").get<std::vector<std::string>>();
  if (j.contains("source_doc_id") && !j["source_doc_id"].is_null()) {
    ex.source_doc_id = j["source_doc_id"].get<std::string>();
  }
  if (j.contains("category") && !j["category"].is_null()) {
    ex.category = corpus::category_from_json(j["category"]);
  }
  ex.split = parse_split(j.at("split").get<std::string>());
  ex.missing_context = j.value("missing_context", false);
  ex.rafs_used = j.value("rafs_used", false);
  return ex;
}

void write_examples(const std::filesystem::path& path, const std::vector<RaftExample>& examples) {
  std::vector<nlohmann::ordered_json> records;
  records.reserve(examples.size());
  for (const auto& ex : examples) {
    records.push_back(to_json(ex));
  }
  jsonl::write(path, records);
}

std::vector<RaftExample> read_examples(const std::filesystem::path& path) {
  std::vector<RaftExample> out;
  for (const auto& j : jsonl::read(path)) {
    out.push_back(example_from_json(j));
  }
  return out;
}

nlohmann::ordered_json reference_hyperparameters() {
  return {{"adapter", "lora"},
          {"lora_rank", 128},
          {"lora_alpha", 32},
          {"lora_dropout", 0.0},
          {"epochs", 5},
          {"lr", 2e-5},
          {"batch", 8},
          {"grad_accum", 2},
          {"warmup_ratio", 0.1},
          {"weight_decay", 0.0},
          {"lr_scheduler", "cosine"},
          {"max_seq", 8192},
          {"quantization", "4bit"},
          {"gradient_checkpointing", true}};
}

}  // namespace ragsmith::raft
