#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "ragsmith/corpus/types.hpp"

namespace ragsmith::synth {

enum class Provenance { Q2ARaw, Q2ARefined, Synthetic, SyntheticRafs };

std::string_view to_string(Provenance p);
Provenance parse_provenance(std::string_view name);

struct QAPair {
  std::string qa_id;
  std::string question;
  std::string answer;
  Provenance provenance = Provenance::Q2ARaw;
  std::optional<std::string> source_doc_id;
  std::optional<corpus::Category> category;

  /// Throws corpus::ValidationError when question/answer are blank or a
  /// synthetic pair lacks its source document.
  void validate() const;
  bool is_synthetic() const {
    return provenance == Provenance::Synthetic || provenance == Provenance::SyntheticRafs;
  }
  bool operator==(const QAPair&) const = default;
};

nlohmann::ordered_json to_json(const QAPair& qa);
QAPair qa_from_json(const nlohmann::json& j);

std::vector<QAPair> read_qa_file(const std::filesystem::path& path);
void write_qa_file(const std::filesystem::path& path, const std::vector<QAPair>& pairs);

}  // namespace ragsmith::synth
