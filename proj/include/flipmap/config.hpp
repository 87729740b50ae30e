#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "flipmap/campaign.hpp"
#include "flipmap/embedding.hpp"

namespace flipmap::config {

struct EmbeddingSection {
  std::string provider = "http";  // "http" | "mock"
  size_t mock_dim = 64;
  semantics::HttpEmbeddingConfig http;
  int concurrency = 4;
  size_t batch_size = 64;
  std::string cache_dir = "embedding_cache";
};

struct ChatSection {
  harness::HttpChatConfig http;
  int concurrency = 2;
  harness::SamplingParams sampling;
};

// Tool-wide configuration. Credentials never live here: only the names of
// the environment variables that hold them.
struct RunConfig {
  EmbeddingSection embedding;
  ChatSection chat;
  std::string dataset_path;
  std::string subset_path;
  std::string refusal_phrases_path;
  std::string output_dir = "out";
  std::string system_template_path;
  std::string user_template_path;
};

// Loads the JSON config file (all keys optional), then applies environment
// overrides. Flag handling on top of this lives in the CLI, giving the
// precedence flags > environment > file.
RunConfig load_config(const std::optional<std::filesystem::path>& path);

// Environment overrides, also applied by load_config:
//   FLIPMAP_EMBED_BASE_URL, FLIPMAP_EMBED_MODEL,
//   FLIPMAP_CHAT_BASE_URL, FLIPMAP_CHAT_MODEL,
//   FLIPMAP_CACHE_DIR, FLIPMAP_OUTPUT_DIR
void apply_env_overrides(RunConfig& config);

nlohmann::json to_snapshot_json(const RunConfig& config);

}  // namespace flipmap::config
