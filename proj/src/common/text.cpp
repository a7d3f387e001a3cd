#include "ragsmith/common/text.hpp"

#include <cstdio>

namespace ragsmith::text {

namespace {

bool is_token_byte(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
}

bool is_continuation(unsigned char c) { return (c & 0xC0U) == 0x80U; }

char lower_ascii(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view input) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : input) {
    if (is_token_byte(static_cast<unsigned char>(c))) {
      current.push_back(lower_ascii(c));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) {
    tokens.push_back(std::move(current));
  }
  return tokens;
}

std::string to_lower(std::string_view input) {
  std::string out(input);
  for (char& c : out) {
    c = lower_ascii(c);
  }
  return out;
}

std::string_view trim(std::string_view input) {
  constexpr std::string_view ws = " \t\r\n\f\v";
  const auto first = input.find_first_not_of(ws);
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = input.find_last_not_of(ws);
  return input.substr(first, last - first + 1);
}

bool is_blank(std::string_view input) { return trim(input).empty(); }

std::size_t utf8_length(std::string_view input) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < input.size(); ++i) {
    if (i == 0 || !is_continuation(static_cast<unsigned char>(input[i]))) {
      ++n;
    }
  }
  return n;
}

std::vector<std::size_t> utf8_boundaries(std::string_view input) {
  std::vector<std::size_t> bounds;
  bounds.reserve(input.size() + 1);
  for (std::size_t i = 0; i < input.size(); ++i) {
    if (i == 0 || !is_continuation(static_cast<unsigned char>(input[i]))) {
      bounds.push_back(i);
    }
  }
  bounds.push_back(input.size());
  return bounds;
}

std::string utf8_substr(std::string_view input, std::size_t start, std::size_t end) {
  const auto bounds = utf8_boundaries(input);
  const std::size_t chars = bounds.size() - 1;
  start = std::min(start, chars);
  end = std::min(std::max(end, start), chars);
  return std::string(input.substr(bounds[start], bounds[end] - bounds[start]));
}

std::string utf8_prefix(std::string_view input, std::size_t count) {
  std::size_t seen = 0;
  for (std::size_t i = 0; i < input.size(); ++i) {
    if (i == 0 || !is_continuation(static_cast<unsigned char>(input[i]))) {
      if (seen == count) {
        return std::string(input.substr(0, i));
      }
      ++seen;
    }
  }
  return std::string(input);
}

std::uint64_t fnv1a64(std::string_view input) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (char c : input) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::string render_placeholders(std::string_view tmpl,
                                const std::map<std::string, std::string>& values) {
  std::string out;
  out.reserve(tmpl.size());
  std::size_t pos = 0;
  while (pos < tmpl.size()) {
    const auto open = tmpl.find("{{", pos);
    if (open == std::string_view::npos) {
      break;
    }
    const auto close = tmpl.find("}}", open + 2);
    if (close == std::string_view::npos) {
      break;
    }
    out.append(tmpl.substr(pos, open - pos));
    const std::string key(tmpl.substr(open + 2, close - open - 2));
    if (auto it = values.find(key); it != values.end()) {
      out.append(it->second);
    } else {
      out.append(tmpl.substr(open, close + 2 - open));
    }
    pos = close + 2;
  }
  out.append(tmpl.substr(pos));
  return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) {
      out.append(sep);
    }
    out.append(parts[i]);
  }
  return out;
}

std::vector<std::string> split(std::string_view input, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = input.find(sep, start);
    out.emplace_back(input.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) {
      break;
    }
    start = pos + 1;
  }
  return out;
}

}  // namespace ragsmith::text
