#include "flipmap/codec.hpp"

#include <algorithm>
#include <cstdio>

#include "flipmap/util.hpp"

namespace flipmap::codec {

namespace {

constexpr std::array<std::string_view, 8> kModeNames = {
    "identity", "fwo", "fcw", "fcs", "fmm", "aim", "aim_fwo", "aim_fcw",
};

std::vector<std::string> split_words(std::string_view collapsed) {
  std::vector<std::string> words;
  size_t start = 0;
  while (start < collapsed.size()) {
    size_t pos = collapsed.find(' ', start);
    if (pos == std::string_view::npos) pos = collapsed.size();
    words.emplace_back(collapsed.substr(start, pos - start));
    start = pos + 1;
  }
  return words;
}

std::string printable_byte(char c) {
  if (c >= 0x20 && c < 0x7f) {
    return std::string("'") + c + "'";
  }
  char buf[8];
  std::snprintf(buf, sizeof(buf), "0x%02x", static_cast<unsigned char>(c));
  return buf;
}

// Parses an AIM-family payload into numerical words. Positions in raised
// errors are byte offsets into `payload`; structural inversion (for the
// composed modes) happens after parsing so offsets stay meaningful.
std::vector<std::vector<int>> parse_aim(std::string_view payload) {
  std::vector<std::vector<int>> words;
  if (payload.empty()) return words;

  std::vector<int> current;
  size_t i = 0;
  bool at_word_start = true;
  while (i < payload.size()) {
    char c = payload[i];
    if (c == ' ') {
      if (at_word_start) {
        throw MalformedPayload("empty numerical word", i);
      }
      words.push_back(std::move(current));
      current.clear();
      at_word_start = true;
      ++i;
      continue;
    }
    if (c < '0' || c > '9') {
      throw MalformedPayload("expected digit, found " + printable_byte(c), i);
    }
    size_t start = i;
    while (i < payload.size() && payload[i] >= '0' && payload[i] <= '9') ++i;
    std::string_view digits = payload.substr(start, i - start);
    if (digits.size() > 1 && digits[0] == '0') {
      throw MalformedPayload("leading zero in unit", start);
    }
    if (digits.size() > 2) {
      throw MalformedPayload("unit value " + std::string(digits) + " outside 1..26", start);
    }
    int value = 0;
    for (char d : digits) value = value * 10 + (d - '0');
    if (value < 1 || value > 26) {
      throw MalformedPayload("unit value " + std::string(digits) + " outside 1..26", start);
    }
    if (i >= payload.size() || payload[i] != ':') {
      throw MalformedPayload("missing ':' after unit " + std::string(digits),
                             i < payload.size() ? i : payload.size());
    }
    ++i;
    current.push_back(value);
    at_word_start = false;
  }
  if (at_word_start) {
    // Trailing space: the final word is empty.
    throw MalformedPayload("empty numerical word", payload.size());
  }
  words.push_back(std::move(current));
  return words;
}

std::string aim_words_to_text(const std::vector<std::vector<int>>& words) {
  std::string out;
  for (size_t w = 0; w < words.size(); ++w) {
    if (w > 0) out.push_back(' ');
    for (int v : words[w]) out.push_back(static_cast<char>('a' + v - 1));
  }
  return out;
}

}  // namespace

std::string_view mode_name(TransformMode mode) {
  return kModeNames[static_cast<size_t>(mode)];
}

std::optional<TransformMode> mode_from_name(std::string_view name) {
  for (size_t i = 0; i < kModeNames.size(); ++i) {
    if (kModeNames[i] == name) return kAllModes[i];
  }
  return std::nullopt;
}

NonAlphabeticInput::NonAlphabeticInput(char offending, size_t offset)
    : Error("alphabet index mapping undefined for character " +
            printable_byte(offending) + " at offset " + std::to_string(offset)),
      offending_(offending),
      offset_(offset) {}

MalformedPayload::MalformedPayload(const std::string& what, size_t offset)
    : Error("malformed payload at offset " + std::to_string(offset) + ": " + what),
      offset_(offset) {}

std::string collapse_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (util::is_ascii_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(c);
  }
  return out;
}

std::string normalize(std::string_view text) {
  std::string out = collapse_whitespace(text);
  for (char& c : out) c = util::ascii_lower(c);
  return out;
}

std::string fwo_encode(std::string_view text) {
  auto words = split_words(collapse_whitespace(text));
  std::reverse(words.begin(), words.end());
  return util::join(words, " ");
}

std::string fcw_encode(std::string_view text) {
  auto words = split_words(collapse_whitespace(text));
  for (auto& word : words) std::reverse(word.begin(), word.end());
  return util::join(words, " ");
}

std::string fcs_encode(std::string_view text) {
  std::string out = collapse_whitespace(text);
  std::reverse(out.begin(), out.end());
  return out;
}

std::string aim_encode(std::string_view text, AimPolicy policy) {
  const std::string norm = normalize(text);
  std::vector<std::string> words;
  std::string current;
  for (size_t i = 0; i < norm.size(); ++i) {
    char c = norm[i];
    if (c == ' ') {
      if (!current.empty()) words.push_back(std::move(current));
      current.clear();
      continue;
    }
    if (c >= 'a' && c <= 'z') {
      current += std::to_string(c - 'a' + 1);
      current.push_back(':');
      continue;
    }
    if (policy == AimPolicy::kStrict) {
      throw NonAlphabeticInput(c, i);
    }
    // kDrop: omit the character; words emptied this way vanish entirely.
  }
  if (!current.empty()) words.push_back(std::move(current));
  return util::join(words, " ");
}

std::string aim_fwo_encode(std::string_view text, AimPolicy policy) {
  return fwo_encode(aim_encode(text, policy));
}

std::string aim_fcw_encode(std::string_view text, AimPolicy policy) {
  auto words = parse_aim(aim_encode(text, policy));
  std::vector<std::string> out_words;
  out_words.reserve(words.size());
  for (auto& units : words) {
    std::reverse(units.begin(), units.end());
    std::string w;
    for (int v : units) {
      w += std::to_string(v);
      w.push_back(':');
    }
    out_words.push_back(std::move(w));
  }
  return util::join(out_words, " ");
}

std::string encode(TransformMode mode, std::string_view text, AimPolicy policy) {
  switch (mode) {
    case TransformMode::IDENTITY:
      return normalize(text);
    case TransformMode::FWO:
      return fwo_encode(text);
    case TransformMode::FCW:
      return fcw_encode(text);
    case TransformMode::FCS:
    case TransformMode::FMM:
      return fcs_encode(text);
    case TransformMode::AIM:
      return aim_encode(text, policy);
    case TransformMode::AIM_FWO:
      return aim_fwo_encode(text, policy);
    case TransformMode::AIM_FCW:
      return aim_fcw_encode(text, policy);
  }
  throw Error("unknown transform mode");
}

EncodedPrompt encode_prompt(const Prompt& prompt, TransformMode mode, AimPolicy policy) {
  return EncodedPrompt{prompt.id, mode, encode(mode, prompt.text, policy)};
}

std::string decode(TransformMode mode, std::string_view payload) {
  switch (mode) {
    case TransformMode::IDENTITY:
      return normalize(payload);
    case TransformMode::FWO:
      // Word-order flipping is an involution; normalize afterwards.
      return normalize(fwo_encode(payload));
    case TransformMode::FCW:
      return normalize(fcw_encode(payload));
    case TransformMode::FCS:
    case TransformMode::FMM:
      return normalize(fcs_encode(payload));
    case TransformMode::AIM:
      return aim_words_to_text(parse_aim(payload));
    case TransformMode::AIM_FWO: {
      auto words = parse_aim(payload);
      std::reverse(words.begin(), words.end());
      return aim_words_to_text(words);
    }
    case TransformMode::AIM_FCW: {
      auto words = parse_aim(payload);
      for (auto& units : words) std::reverse(units.begin(), units.end());
      return aim_words_to_text(words);
    }
  }
  throw Error("unknown transform mode");
}

}  // namespace flipmap::codec
