#include "ragsmith/eval/report.hpp"

#include <cstdio>
#include <stdexcept>

#include "ragsmith/common/jsonl.hpp"

namespace ragsmith::eval {

std::map<std::string, std::string> read_predictions(const std::filesystem::path& path) {
  std::map<std::string, std::string> out;
  for (const auto& j : jsonl::read(path)) {
    auto id = j.at("example_id").get<std::string>();
    if (!out.emplace(id, j.at("response").get<std::string>()).second) {
      throw std::runtime_error(path.string() + ": duplicate prediction for " + id);
    }
  }
  return out;
}

void write_predictions(const std::filesystem::path& path, const std::map<std::string, std::string>& predictions) {
  std::vector<nlohmann::ordered_json> records;
  records.reserve(predictions.size());
  for (const auto& [id, response] : predictions) {
    records.push_back({{"example_id", id}, {"response", response}});
  }
  jsonl::write(path, records);
}

std::vector<EvalItem> join_predictions(const std::vector<raft::RaftExample>& dataset,
                                       const std::map<std::string, std::string>& predictions) {
  std::vector<EvalItem> items;
  items.reserve(dataset.size());
  for (const auto& ex : dataset) {
    auto it = predictions.find(ex.example_id);
    if (it == predictions.end()) {
      throw std::runtime_error("no prediction for example " + ex.example_id);
    }
    items.push_back({ex.example_id, ex.answer, it->second});
  }
  return items;
}

LeakageReport leakage_report(const ScoreReport& full_set, const ScoreReport& missing_context_set,
                             std::string label) {
  LeakageReport r;
  r.label = std::move(label);
  r.recall_full = full_set.mean_recall;
  r.recall_missing_context = missing_context_set.mean_recall;
  r.gap = r.recall_full - r.recall_missing_context;
  r.idk_full = full_set.idk_count;
  r.idk_missing_context = missing_context_set.idk_count;
  r.n_full = full_set.n;
  r.n_missing_context = missing_context_set.n;
  return r;
}

nlohmann::ordered_json LeakageReport::to_json() const {
  return {{"label", label},
          {"recall_full", recall_full},
          {"recall_missing_context", recall_missing_context},
          {"gap", gap},
          {"idk_full", idk_full},
          {"idk_missing_context", idk_missing_context},
          {"n_full", n_full},
          {"n_missing_context", n_missing_context}};
}

std::string LeakageReport::to_table() const {
  char buf[512];
  std::string out;
  std::snprintf(buf, sizeof(buf), "%-24s | %14s | %16s | %8s | %9s | %11s\n", "Model", "Recall (full)",
                "Recall (no ctx)", "Gap", "#IDK full", "#IDK no ctx");
  out += buf;
  out += std::string(24, '-') + "-+-" + std::string(14, '-') + "-+-" + std::string(16, '-') + "-+-" +
         std::string(8, '-') + "-+-" + std::string(9, '-') + "-+-" + std::string(11, '-') + "\n";
  std::snprintf(buf, sizeof(buf), "%-24s | %13.2f%% | %15.2f%% | %7.2f%% | %9zu | %11zu\n", label.c_str(),
                recall_full * 100.0, recall_missing_context * 100.0, gap * 100.0, idk_full, idk_missing_context);
  out += buf;
  return out;
}

}  // namespace ragsmith::eval
