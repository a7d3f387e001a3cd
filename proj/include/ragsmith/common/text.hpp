#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace ragsmith::text {

/// Lowercases ASCII letters and splits on every ASCII byte that is not a
/// letter or digit. Bytes >= 0x80 are kept inside tokens so UTF-8 words
/// survive intact.
std::vector<std::string> tokenize(std::string_view input);

std::string to_lower(std::string_view input);
std::string_view trim(std::string_view input);
bool is_blank(std::string_view input);

// Character (code point) helpers. A character starts at every byte that is
// not a UTF-8 continuation byte; malformed sequences degrade to one
// character per byte.
std::size_t utf8_length(std::string_view input);

/// Byte offset of each character start, followed by input.size().
std::vector<std::size_t> utf8_boundaries(std::string_view input);

/// Characters [start, end) of input.
std::string utf8_substr(std::string_view input, std::size_t start, std::size_t end);

/// First `count` characters of input.
std::string utf8_prefix(std::string_view input, std::size_t count);

std::uint64_t fnv1a64(std::string_view input);
std::string hex64(std::uint64_t value);

/// Replaces every `{{key}}` with its value in a single left-to-right pass;
/// substituted text is never rescanned. Unknown placeholders are left as is.
std::string render_placeholders(std::string_view tmpl,
                                const std::map<std::string, std::string>& values);

std::string join(const std::vector<std::string>& parts, std::string_view sep);
std::vector<std::string> split(std::string_view input, char sep);

}  // namespace ragsmith::text
