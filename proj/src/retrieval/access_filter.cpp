#include "ragsmith/retrieval/access_filter.hpp"

namespace ragsmith::retrieval {

AccessFilter AccessFilter::unrestricted() {
  AccessFilter f;
  f.unrestricted_ = true;
  return f;
}

bool AccessFilter::authorizes(const corpus::GroupSet& chunk_groups) const {
  if (unrestricted_ || chunk_groups.empty()) {
    return true;
  }
  // Both sets are ordered: merge-style intersection test.
  auto a = chunk_groups.begin();
  auto b = user_groups_.begin();
  while (a != chunk_groups.end() && b != user_groups_.end()) {
    if (*a == *b) {
      return true;
    }
    if (*a < *b) {
      ++a;
    } else {
      ++b;
    }
  }
  return false;
}

}  // namespace ragsmith::retrieval
