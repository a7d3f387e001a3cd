#pragma once

#include "ragsmith/corpus/types.hpp"

namespace ragsmith::retrieval {

/// A chunk is authorized iff it is public (no groups) or shares at least one
/// group with the user.
class AccessFilter {
 public:
  /// Public-only access.
  AccessFilter() = default;
  explicit AccessFilter(corpus::GroupSet user_groups) : user_groups_(std::move(user_groups)) {}

  /// Sees every chunk. For offline dataset builds only; never produced from
  /// a user identity.
  static AccessFilter unrestricted();

  bool authorizes(const corpus::GroupSet& chunk_groups) const;
  const corpus::GroupSet& user_groups() const { return user_groups_; }
  bool is_unrestricted() const { return unrestricted_; }

 private:
  corpus::GroupSet user_groups_;
  bool unrestricted_ = false;
};

}  // namespace ragsmith::retrieval
