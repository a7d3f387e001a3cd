#include "ragsmith/raft/split.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace ragsmith::raft {

nlohmann::ordered_json SplitPlan::to_json() const {
  nlohmann::ordered_json per = nlohmann::ordered_json::object();
  for (const auto& [category, s] : per_category) {
    per[std::string(corpus::to_string(category))] = {{"train", s.train}, {"test", s.test}};
  }
  return {{"per_category", per}, {"total_test", total_test}};
}

SplitPlan apportion_split(const std::map<corpus::Category, std::size_t>& category_counts,
                          double test_fraction, std::size_t total) {
  if (!(test_fraction >= 0.0 && test_fraction <= 1.0)) {
    throw std::invalid_argument("apportion_split: test_fraction must lie in [0, 1]");
  }
  std::size_t sum = 0;
  std::size_t nonempty = 0;
  for (const auto& [category, n] : category_counts) {
    sum += n;
    nonempty += n > 0 ? 1 : 0;
  }
  if (sum != total) {
    throw std::invalid_argument("apportion_split: total does not equal the sum of category counts");
  }
  const auto slots = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(total)));
  if (slots < nonempty) {
    throw std::invalid_argument("apportion_split: " + std::to_string(slots) +
                                " test slots cannot give each of " + std::to_string(nonempty) +
                                " categories one");
  }

  struct Row {
    corpus::Category category;
    std::size_t count;
    double remainder;
    std::size_t test;
  };
  std::vector<Row> rows;
  std::size_t assigned = 0;
  for (const auto& [category, n] : category_counts) {
    const double quota = static_cast<double>(n) * test_fraction;
    const double floor_q = std::floor(quota);
    rows.push_back({category, n, quota - floor_q, static_cast<std::size_t>(floor_q)});
    assigned += rows.back().test;
  }

  // Largest remainder for the slots the floors left over.
  std::vector<std::size_t> order(rows.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    order[i] = i;
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return rows[a].remainder > rows[b].remainder; });
  for (std::size_t i = 0; assigned < slots && i < order.size(); ++i) {
    if (rows[order[i]].test < rows[order[i]].count) {
      ++rows[order[i]].test;
      ++assigned;
    }
  }

  // Minimum one test slot per non-empty category.
  for (auto& row : rows) {
    if (row.count == 0 || row.test > 0) {
      continue;
    }
    Row* donor = nullptr;
    for (auto& candidate : rows) {
      if (candidate.test <= 1) {
        continue;
      }
      if (donor == nullptr || candidate.remainder < donor->remainder) {
        donor = &candidate;
      }
    }
    if (donor == nullptr) {
      throw std::invalid_argument("apportion_split: no category can spare a test slot");
    }
    --donor->test;
    row.test = 1;
  }

  SplitPlan plan;
  for (const auto& row : rows) {
    plan.per_category[row.category] = {row.count - row.test, row.test};
    plan.total_test += row.test;
  }
  return plan;
}

}  // namespace ragsmith::raft
