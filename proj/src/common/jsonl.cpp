#include "ragsmith/common/jsonl.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ragsmith/common/text.hpp"

namespace ragsmith::jsonl {

namespace fs = std::filesystem;

std::vector<nlohmann::json> read(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  std::vector<nlohmann::json> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::is_blank(line)) {
      continue;
    }
    try {
      records.push_back(nlohmann::json::parse(line));
    } catch (const nlohmann::json::parse_error& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

void write_text_atomically(const fs::path& path, const std::string& contents) {
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path());
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot write " + path.string());
    }
    out << contents;
    if (!out.flush()) {
      throw std::runtime_error("write failed for " + path.string());
    }
  }
  fs::rename(tmp, path);
}

void write(const fs::path& path, const std::vector<nlohmann::ordered_json>& records) {
  std::string buffer;
  for (const auto& record : records) {
    buffer += record.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
    buffer += '\n';
  }
  write_text_atomically(path, buffer);
}

void append(const fs::path& path, const nlohmann::ordered_json& record) {
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) {
    throw std::runtime_error("cannot append to " + path.string());
  }
  out << record.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
  out.flush();
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace ragsmith::jsonl
