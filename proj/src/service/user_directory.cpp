#include "ragsmith/service/user_directory.hpp"

#include <stdexcept>

#include "ragsmith/common/jsonl.hpp"
#include "ragsmith/common/text.hpp"

namespace ragsmith::service {

UserDirectory UserDirectory::parse(std::string_view contents) {
  std::map<std::string, corpus::GroupSet> users;
  std::size_t line_no = 0;
  for (const auto& raw : text::split(contents, '\n')) {
    ++line_no;
    const auto line = text::trim(raw);
    if (line.empty() || line.front() == '#') {
      continue;
    }
    const auto colon = line.find(':');
    if (colon == std::string::npos) {
      throw std::runtime_error("users file line " + std::to_string(line_no) + ": expected `user_id: groups`");
    }
    const auto user = text::trim(line.substr(0, colon));
    if (user.empty()) {
      throw std::runtime_error("users file line " + std::to_string(line_no) + ": empty user id");
    }
    auto& groups = users[std::string(user)];
    for (const auto& g : text::split(line.substr(colon + 1), ',')) {
      const auto group = text::trim(g);
      if (!group.empty()) {
        groups.emplace(group);
      }
    }
  }
  return UserDirectory(std::move(users));
}

UserDirectory UserDirectory::load(const std::filesystem::path& path) { return parse(jsonl::read_text(path)); }

corpus::GroupSet UserDirectory::groups_for(std::string_view user_id) const {
  auto it = users_.find(std::string(user_id));
  return it == users_.end() ? corpus::GroupSet{} : it->second;
}

}  // namespace ragsmith::service
