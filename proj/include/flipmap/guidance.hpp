#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "flipmap/codec.hpp"
#include "flipmap/error.hpp"

namespace flipmap::guidance {

// Guidance flavors. Only VANILLA renders; the other three are named slots
// reserved for richer scaffolds and error on render.
enum class GuidanceVariant {
  VANILLA,
  VANILLA_COT,
  VANILLA_COT_LANGGPT,
  VANILLA_COT_LANGGPT_FEWSHOT,
};

std::string_view variant_name(GuidanceVariant variant);
std::optional<GuidanceVariant> variant_from_name(std::string_view name);

class UnsupportedMode : public Error {
 public:
  using Error::Error;
};

class UnsupportedVariant : public Error {
 public:
  using Error::Error;
};

// The scaffold around the Step-1 slot. The default text is a reconstruction
// maintained as a single versioned constant; both parts can be overridden
// from plain-text files for prompt ablations.
struct GuidanceTemplate {
  std::string version;
  std::string system_scaffold;  // must contain "{STEP1}" exactly once
  std::string user_frame;       // must contain "{PAYLOAD}" exactly once

  static const GuidanceTemplate& vanilla_default();
  static GuidanceTemplate from_files(const std::filesystem::path& system_path,
                                     const std::optional<std::filesystem::path>& user_path);
};

struct GuidancePrompt {
  codec::TransformMode mode = codec::TransformMode::IDENTITY;
  GuidanceVariant variant = GuidanceVariant::VANILLA;
  std::string step1_text;
  std::string full_text;
};

struct GuidanceBundle {
  GuidancePrompt system;
  std::string user_message;
};

// The mode-specific decoding instruction that fills the Step-1 slot.
// FMM deliberately gets the FWO instruction while its payload is
// FCS-encoded. IDENTITY has no decoding step and raises UnsupportedMode.
std::string step1_for(codec::TransformMode mode);

// Renders the system prompt (scaffold with Step-1 filled in) and the user
// message carrying the encoded payload as the TASK.
GuidanceBundle build_guidance(codec::TransformMode mode, GuidanceVariant variant,
                              std::string_view payload,
                              const GuidanceTemplate& tpl = GuidanceTemplate::vanilla_default());

}  // namespace flipmap::guidance
