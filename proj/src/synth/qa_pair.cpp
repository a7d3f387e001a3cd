#include "ragsmith/synth/qa_pair.hpp"

#include "ragsmith/common/jsonl.hpp"
#include "ragsmith/common/text.hpp"

namespace ragsmith::synth {

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::Q2ARaw:
      return "Q2A_raw";
    case Provenance::Q2ARefined:
      return "Q2A_refined";
    case Provenance::Synthetic:
      return "Synthetic";
    case Provenance::SyntheticRafs:
      return "Synthetic_RAFS";
  }
  return "Q2A_raw";
}

Provenance parse_provenance(std::string_view name) {
  for (auto p : {Provenance::Q2ARaw, Provenance::Q2ARefined, Provenance::Synthetic, Provenance::SyntheticRafs}) {
    if (to_string(p) == name) {
      return p;
    }
  }
  throw std::runtime_error("unknown provenance `" + std::string(name) + "`");
}

void QAPair::validate() const {
  if (text::is_blank(question) || text::is_blank(answer)) {
    throw corpus::ValidationError("QA pair " + qa_id + ": question and answer must be non-empty");
  }
  if (is_synthetic() && !source_doc_id) {
    throw corpus::ValidationError("QA pair " + qa_id + ": synthetic pairs need a source document");
  }
}

nlohmann::ordered_json to_json(const QAPair& qa) {
  nlohmann::ordered_json j{{"qa_id", qa.qa_id},
                           {"question", qa.question},
                           {"answer", qa.answer},
                           {"provenance", to_string(qa.provenance)}};
  j["source_doc_id"] = qa.source_doc_id ? nlohmann::ordered_json(*qa.source_doc_id) : nlohmann::ordered_json();
  j["category"] = qa.category ? nlohmann::ordered_json(corpus::to_string(*qa.category)) : nlohmann::ordered_json();
  return j;
}

QAPair qa_from_json(const nlohmann::json& j) {
  QAPair qa;
  qa.qa_id = j.at("qa_id").get<std::string>();
  qa.question = j.at("question").get<std::string>();
  qa.answer = j.at("answer").get<std::string>();
  qa.provenance = parse_provenance(j.at("provenance").get<std::string>());
  if (j.contains("source_doc_id") && !j["source_doc_id"].is_null()) {
    qa.source_doc_id = j["source_doc_id"].get<std::string>();
  }
  if (j.contains("category") && !j["category"].is_null()) {
    qa.category = corpus::category_from_json(j["category"]);
  }
  return qa;
}

std::vector<QAPair> read_qa_file(const std::filesystem::path& path) {
  std::vector<QAPair> out;
  for (const auto& j : jsonl::read(path)) {
    out.push_back(qa_from_json(j));
  }
  return out;
}

void write_qa_file(const std::filesystem::path& path, const std::vector<QAPair>& pairs) {
  std::vector<nlohmann::ordered_json> records;
  records.reserve(pairs.size());
  for (const auto& qa : pairs) {
    records.push_back(to_json(qa));
  }
  jsonl::write(path, records);
}

}  // namespace ragsmith::synth
