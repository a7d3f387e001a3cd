#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "ragsmith/corpus/types.hpp"

namespace ragsmith::service {

/// user_id -> access groups, read from lines of the form
/// `user_id: group,group,...`. Blank lines and '#' comments are ignored.
class UserDirectory {
 public:
  UserDirectory() = default;
  explicit UserDirectory(std::map<std::string, corpus::GroupSet> users) : users_(std::move(users)) {}

  static UserDirectory parse(std::string_view contents);
  static UserDirectory load(const std::filesystem::path& path);

  /// Unknown (or empty) user ids get the empty set, i.e. public access only.
  corpus::GroupSet groups_for(std::string_view user_id) const;
  const std::map<std::string, corpus::GroupSet>& users() const { return users_; }

 private:
  std::map<std::string, corpus::GroupSet> users_;
};

}  // namespace ragsmith::service
