#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "flipmap/error.hpp"

namespace flipmap::codec {

// The seven payload manipulations plus the identity reference.
//
// FWO      flip word order
// FCW      flip characters within each word
// FCS      flip all characters in the sentence (= FCW after FWO)
// FMM      FCS payload deliberately paired with FWO decoding guidance;
//          the surface form is byte-identical to FCS
// AIM      alphabet index mapping: each letter becomes "<1..26>:"
// AIM_FWO  AIM, then word order flipped
// AIM_FCW  AIM, then the "<n>:" units flipped within each word
enum class TransformMode {
  IDENTITY,
  FWO,
  FCW,
  FCS,
  FMM,
  AIM,
  AIM_FWO,
  AIM_FCW,
};

inline constexpr std::array<TransformMode, 8> kAllModes = {
    TransformMode::IDENTITY, TransformMode::FWO,     TransformMode::FCW,
    TransformMode::FCS,      TransformMode::FMM,     TransformMode::AIM,
    TransformMode::AIM_FWO,  TransformMode::AIM_FCW,
};

// CLI-facing names: "identity", "fwo", ..., "aim_fcw".
std::string_view mode_name(TransformMode mode);
std::optional<TransformMode> mode_from_name(std::string_view name);

// One harmful-behavior instruction with its dataset key.
struct Prompt {
  std::string id;
  std::string text;
};

struct EncodedPrompt {
  std::string source_id;
  TransformMode mode = TransformMode::IDENTITY;
  std::string payload;
};

// How AIM-family encoders treat characters the alphabet mapping does not
// define (anything other than a letter or a space after normalization).
enum class AimPolicy {
  kStrict,  // raise NonAlphabeticInput (default)
  kDrop,    // silently omit the character
};

// The alphabet index mapping is undefined for the offending byte.
class NonAlphabeticInput : public Error {
 public:
  NonAlphabeticInput(char offending, size_t offset);

  char offending() const { return offending_; }
  size_t offset() const { return offset_; }

 private:
  char offending_;
  size_t offset_;
};

// Payload does not parse under the mode's grammar.
class MalformedPayload : public Error {
 public:
  MalformedPayload(const std::string& what, size_t offset);

  size_t offset() const { return offset_; }

 private:
  size_t offset_;
};

// Canonical form: ASCII letters lowercased, whitespace runs collapsed to a
// single space, ends trimmed. AIM-family round-trips are exact on this form.
std::string normalize(std::string_view text);

// Whitespace collapse and trim only; preserves case. All text-mode encoders
// start from this form.
std::string collapse_whitespace(std::string_view text);

std::string fwo_encode(std::string_view text);
std::string fcw_encode(std::string_view text);
std::string fcs_encode(std::string_view text);

std::string aim_encode(std::string_view text, AimPolicy policy = AimPolicy::kStrict);
std::string aim_fwo_encode(std::string_view text, AimPolicy policy = AimPolicy::kStrict);
std::string aim_fcw_encode(std::string_view text, AimPolicy policy = AimPolicy::kStrict);

// Dispatch. IDENTITY returns normalize(text); FMM returns fcs_encode(text).
std::string encode(TransformMode mode, std::string_view text,
                   AimPolicy policy = AimPolicy::kStrict);

EncodedPrompt encode_prompt(const Prompt& prompt, TransformMode mode,
                            AimPolicy policy = AimPolicy::kStrict);

// Inverts encode: decode(m, encode(m, t)) == normalize(t) for every mode.
// For FMM this applies the true FCS inverse, not the word-order flip the
// attack's guidance deceptively asks for.
std::string decode(TransformMode mode, std::string_view payload);

}  // namespace flipmap::codec
