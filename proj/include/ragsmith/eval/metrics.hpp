#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "ragsmith/gateway/gateway_types.hpp"

namespace ragsmith::eval {

struct MetricConfig {
  std::vector<std::string> rephrase_prompts{"That is to say, ", "In other words, ", "To rephrase it, ", "i.e., "};
  bool clamp = true;
  std::vector<std::string> idk_patterns{"i don't know", "i don’t know", "i do not know",
                                        "not enough information", "cannot answer"};

  void validate() const;
};

struct MetricValue {
  double value = 0.0;
  bool empty_prediction = false;
};

/// Mean over the rephrase prompts z of s(ref -> ref | z) / s(ref -> pred | z),
/// where s(x -> y | z) = scorer.score(x, y, z). A blank prediction scores 0
/// and sets empty_prediction. A zero denominator yields 1 when the
/// numerator is also zero and +inf otherwise (so 1 after clamping).
MetricValue normalized_precision(std::string_view ref, std::string_view pred, gateway::SequenceScorer& scorer,
                                 const MetricConfig& cfg = {});

/// As normalized_precision with s(ref -> ref | z) / s(pred -> ref | z).
MetricValue normalized_recall(std::string_view ref, std::string_view pred, gateway::SequenceScorer& scorer,
                              const MetricConfig& cfg = {});

double f1(double precision, double recall);

bool is_idk(std::string_view response, const MetricConfig& cfg = {});
std::size_t count_idk(std::span<const std::string> responses, const MetricConfig& cfg = {});

struct EvalItem {
  std::string example_id;
  std::string reference;
  std::string prediction;
};

struct SampleScore {
  std::string example_id;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  bool empty_prediction = false;
  bool idk = false;
};

struct ScoreReport {
  std::vector<SampleScore> samples;
  double mean_precision = 0.0;
  double mean_recall = 0.0;
  double mean_f1 = 0.0;
  std::size_t idk_count = 0;
  std::size_t n = 0;

  nlohmann::ordered_json to_json() const;
  static ScoreReport from_json(const nlohmann::json& j);
};

/// Scores one sample; the reference self-score is computed once per prompt
/// and shared by precision and recall.
SampleScore score_sample(const EvalItem& item, gateway::SequenceScorer& scorer, const MetricConfig& cfg = {});

/// Scores every item (in parallel, order preserved) and aggregates.
ScoreReport score_predictions(std::span<const EvalItem> items, gateway::SequenceScorer& scorer,
                              const MetricConfig& cfg = {}, std::size_t workers = 4);

/// Recomputes the means and IDK count from `samples`.
void aggregate(ScoreReport& report);

}  // namespace ragsmith::eval
