#include "flipmap/config.hpp"

#include <cstdlib>
#include <fstream>

namespace flipmap::config {

namespace {

void maybe_env(std::string& target, const char* name) {
  const char* value = std::getenv(name);
  if (value != nullptr && *value != '\0') target = value;
}

void parse_retry(const nlohmann::json& j, net::RetryPolicy& retry) {
  retry.max_attempts = j.value("max_attempts", retry.max_attempts);
  retry.base_delay_ms = j.value("base_delay_ms", retry.base_delay_ms);
  retry.multiplier = j.value("multiplier", retry.multiplier);
  retry.max_delay_ms = j.value("max_delay_ms", retry.max_delay_ms);
}

}  // namespace

RunConfig load_config(const std::optional<std::filesystem::path>& path) {
  RunConfig config;
  if (path) {
    std::ifstream in(*path);
    if (!in) {
      throw ConfigError("cannot open config file " + path->string());
    }
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError("config file " + path->string() + ": " + e.what());
    }

    if (j.contains("embedding")) {
      const auto& e = j["embedding"];
      config.embedding.provider = e.value("provider", config.embedding.provider);
      config.embedding.mock_dim = e.value("mock_dim", config.embedding.mock_dim);
      config.embedding.http.base_url = e.value("base_url", config.embedding.http.base_url);
      config.embedding.http.path = e.value("path", config.embedding.http.path);
      config.embedding.http.model = e.value("model", config.embedding.http.model);
      config.embedding.http.api_key_env =
          e.value("api_key_env", config.embedding.http.api_key_env);
      config.embedding.http.timeout_s = e.value("timeout_s", config.embedding.http.timeout_s);
      config.embedding.concurrency = e.value("concurrency", config.embedding.concurrency);
      config.embedding.batch_size = e.value("batch_size", config.embedding.batch_size);
      config.embedding.cache_dir = e.value("cache_dir", config.embedding.cache_dir);
      if (e.contains("retry")) parse_retry(e["retry"], config.embedding.http.retry);
    }
    if (j.contains("chat")) {
      const auto& c = j["chat"];
      config.chat.http.base_url = c.value("base_url", config.chat.http.base_url);
      config.chat.http.path = c.value("path", config.chat.http.path);
      config.chat.http.model = c.value("model", config.chat.http.model);
      config.chat.http.api_key_env = c.value("api_key_env", config.chat.http.api_key_env);
      config.chat.http.timeout_s = c.value("timeout_s", config.chat.http.timeout_s);
      config.chat.concurrency = c.value("concurrency", config.chat.concurrency);
      config.chat.sampling.temperature =
          c.value("temperature", config.chat.sampling.temperature);
      config.chat.sampling.max_tokens =
          c.value("max_tokens", config.chat.sampling.max_tokens);
      if (c.contains("retry")) parse_retry(c["retry"], config.chat.http.retry);
    }
    config.dataset_path = j.value("dataset_path", config.dataset_path);
    config.subset_path = j.value("subset_path", config.subset_path);
    config.refusal_phrases_path =
        j.value("refusal_phrases_path", config.refusal_phrases_path);
    config.output_dir = j.value("output_dir", config.output_dir);
    config.system_template_path =
        j.value("system_template_path", config.system_template_path);
    config.user_template_path = j.value("user_template_path", config.user_template_path);
  }
  apply_env_overrides(config);
  return config;
}

void apply_env_overrides(RunConfig& config) {
  maybe_env(config.embedding.http.base_url, "FLIPMAP_EMBED_BASE_URL");
  maybe_env(config.embedding.http.model, "FLIPMAP_EMBED_MODEL");
  maybe_env(config.chat.http.base_url, "FLIPMAP_CHAT_BASE_URL");
  maybe_env(config.chat.http.model, "FLIPMAP_CHAT_MODEL");
  maybe_env(config.embedding.cache_dir, "FLIPMAP_CACHE_DIR");
  maybe_env(config.output_dir, "FLIPMAP_OUTPUT_DIR");
}

nlohmann::json to_snapshot_json(const RunConfig& config) {
  return {
      {"embedding",
       {{"provider", config.embedding.provider},
        {"base_url", config.embedding.http.base_url},
        {"model", config.embedding.http.model},
        {"api_key_env", config.embedding.http.api_key_env},
        {"concurrency", config.embedding.concurrency},
        {"batch_size", config.embedding.batch_size},
        {"cache_dir", config.embedding.cache_dir}}},
      {"chat",
       {{"base_url", config.chat.http.base_url},
        {"model", config.chat.http.model},
        {"api_key_env", config.chat.http.api_key_env},
        {"concurrency", config.chat.concurrency},
        {"temperature", config.chat.sampling.temperature},
        {"max_tokens", config.chat.sampling.max_tokens}}},
      {"dataset_path", config.dataset_path},
      {"subset_path", config.subset_path},
      {"output_dir", config.output_dir},
  };
}

}  // namespace flipmap::config
