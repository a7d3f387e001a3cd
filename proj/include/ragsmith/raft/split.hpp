#pragma once

#include <cstddef>
#include <map>

#include "json.hpp"
#include "ragsmith/corpus/types.hpp"

namespace ragsmith::raft {

struct CategorySplit {
  std::size_t train = 0;
  std::size_t test = 0;

  bool operator==(const CategorySplit&) const = default;
};

struct SplitPlan {
  std::map<corpus::Category, CategorySplit> per_category;
  std::size_t total_test = 0;

  nlohmann::ordered_json to_json() const;
};

/// Per-category train/test apportionment.
///
/// T = round(test_fraction * total) test slots are handed out by largest
/// remainder over the quotas count * test_fraction (ties in category
/// order). Every non-empty category is then guaranteed one test slot; each
/// such slot is taken from the category with the smallest fractional
/// remainder among those holding more than one test slot.
///
/// Throws std::invalid_argument when total differs from the sum of counts,
/// the fraction is outside [0, 1], or T cannot cover one slot per category.
SplitPlan apportion_split(const std::map<corpus::Category, std::size_t>& category_counts,
                          double test_fraction, std::size_t total);

}  // namespace ragsmith::raft
