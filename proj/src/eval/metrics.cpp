#include "ragsmith/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ragsmith/common/parallel.hpp"
#include "ragsmith/common/text.hpp"

namespace ragsmith::eval {
namespace {

double ratio(double numerator, double denominator) {
  if (!std::isfinite(numerator) || !std::isfinite(denominator)) {
    throw std::runtime_error("scorer returned a non-finite score");
  }
  if (denominator == 0.0) {
    return numerator == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  }
  return numerator / denominator;
}

// Sorting before summation makes the mean independent of prompt order.
double finish(std::vector<double> ratios, bool clamp) {
  std::sort(ratios.begin(), ratios.end());
  double sum = 0.0;
  for (double r : ratios) {
    sum += r;
  }
  double mean = sum / static_cast<double>(ratios.size());
  if (clamp) {
    mean = std::clamp(mean, 0.0, 1.0);
  }
  return mean;
}

void require_reference(std::string_view ref) {
  if (text::is_blank(ref)) {
    throw std::invalid_argument("reference text must be non-empty");
  }
}

MetricValue directional(std::string_view ref, std::string_view pred, gateway::SequenceScorer& scorer,
                        const MetricConfig& cfg, bool precision) {
  cfg.validate();
  require_reference(ref);
  if (text::is_blank(pred)) {
    return {0.0, true};
  }
  std::vector<double> ratios;
  ratios.reserve(cfg.rephrase_prompts.size());
  for (const auto& z : cfg.rephrase_prompts) {
    const double self = scorer.score(ref, ref, z).value;
    const double cross = precision ? scorer.score(ref, pred, z).value : scorer.score(pred, ref, z).value;
    ratios.push_back(ratio(self, cross));
  }
  return {finish(std::move(ratios), cfg.clamp), false};
}

}  // namespace

void MetricConfig::validate() const {
  if (rephrase_prompts.empty()) {
    throw std::invalid_argument("MetricConfig: rephrase_prompts must not be empty");
  }
}

MetricValue normalized_precision(std::string_view ref, std::string_view pred, gateway::SequenceScorer& scorer,
                                 const MetricConfig& cfg) {
  return directional(ref, pred, scorer, cfg, true);
}

MetricValue normalized_recall(std::string_view ref, std::string_view pred, gateway::SequenceScorer& scorer,
                              const MetricConfig& cfg) {
  return directional(ref, pred, scorer, cfg, false);
}

double f1(double precision, double recall) { return (precision + recall) / 2.0; }

bool is_idk(std::string_view response, const MetricConfig& cfg) {
  const auto lower = text::to_lower(response);
  return std::any_of(cfg.idk_patterns.begin(), cfg.idk_patterns.end(), [&](const std::string& p) {
    return !p.empty() && lower.find(text::to_lower(p)) != std::string::npos;
  });
}

std::size_t count_idk(std::span<const std::string> responses, const MetricConfig& cfg) {
  return static_cast<std::size_t>(
      std::count_if(responses.begin(), responses.end(), [&](const std::string& r) { return is_idk(r, cfg); }));
}

SampleScore score_sample(const EvalItem& item, gateway::SequenceScorer& scorer, const MetricConfig& cfg) {
  cfg.validate();
  require_reference(item.reference);
  SampleScore s;
  s.example_id = item.example_id;
  s.idk = is_idk(item.prediction, cfg);
  if (text::is_blank(item.prediction)) {
    s.empty_prediction = true;
    return s;
  }
  std::vector<double> p_ratios;
  std::vector<double> r_ratios;
  for (const auto& z : cfg.rephrase_prompts) {
    const double self = scorer.score(item.reference, item.reference, z).value;
    p_ratios.push_back(ratio(self, scorer.score(item.reference, item.prediction, z).value));
    r_ratios.push_back(ratio(self, scorer.score(item.prediction, item.reference, z).value));
  }
  s.precision = finish(std::move(p_ratios), cfg.clamp);
  s.recall = finish(std::move(r_ratios), cfg.clamp);
  s.f1 = f1(s.precision, s.recall);
  return s;
}

void aggregate(ScoreReport& report) {
  report.n = report.samples.size();
  report.idk_count = 0;
  double p = 0.0;
  double r = 0.0;
  double f = 0.0;
  for (const auto& s : report.samples) {
    p += s.precision;
    r += s.recall;
    f += s.f1;
    report.idk_count += s.idk ? 1 : 0;
  }
  const double n = report.n == 0 ? 1.0 : static_cast<double>(report.n);
  report.mean_precision = p / n;
  report.mean_recall = r / n;
  report.mean_f1 = f / n;
}

ScoreReport score_predictions(std::span<const EvalItem> items, gateway::SequenceScorer& scorer,
                              const MetricConfig& cfg, std::size_t workers) {
  cfg.validate();
  ScoreReport report;
  report.samples.resize(items.size());
  parallel_for(items.size(), workers, [&](std::size_t i) { report.samples[i] = score_sample(items[i], scorer, cfg); });
  aggregate(report);
  return report;
}

nlohmann::ordered_json ScoreReport::to_json() const {
  nlohmann::ordered_json per = nlohmann::ordered_json::array();
  for (const auto& s : samples) {
    per.push_back({{"example_id", s.example_id},
                   {"precision", s.precision},
                   {"recall", s.recall},
                   {"f1", s.f1},
                   {"empty_prediction", s.empty_prediction},
                   {"idk", s.idk}});
  }
  return {{"n", n},
          {"mean_precision", mean_precision},
          {"mean_recall", mean_recall},
          {"mean_f1", mean_f1},
          {"idk_count", idk_count},
          {"samples", per}};
}

ScoreReport ScoreReport::from_json(const nlohmann::json& j) {
  ScoreReport report;
  for (const auto& s : j.at("samples")) {
    SampleScore sample;
    sample.example_id = s.at("example_id").get<std::string>();
    sample.precision = s.at("precision").get<double>();
    sample.recall = s.at("recall").get<double>();
    sample.f1 = s.at("f1").get<double>();
    sample.empty_prediction = s.value("empty_prediction", false);
    sample.idk = s.value("idk", false);
    report.samples.push_back(std::move(sample));
  }
  aggregate(report);
  return report;
}

}  // namespace ragsmith::eval
