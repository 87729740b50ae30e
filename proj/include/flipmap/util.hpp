#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace flipmap::util {

// Locale-independent ASCII helpers. The codecs and matchers must behave the
// same regardless of the process locale.
inline char ascii_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

inline bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\v' || c == '\f' || c == '\r';
}

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);

std::vector<std::string> split(std::string_view s, char sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

// Case-insensitive substring search (ASCII case folding only).
bool contains_ci(std::string_view haystack, std::string_view needle);

// Replaces the first occurrence of `marker` in `text`. Returns the number of
// occurrences found (0, 1 or 2 meaning "more than one").
size_t replace_marker(std::string& text, std::string_view marker, std::string_view value);

// Current wall-clock time as "YYYY-MM-DDTHH:MM:SSZ".
std::string iso8601_utc_now();

}  // namespace flipmap::util
