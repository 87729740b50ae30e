#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "flipmap/codec.hpp"
#include "flipmap/dataset.hpp"
#include "flipmap/guidance.hpp"
#include "flipmap/net.hpp"

namespace flipmap::harness {

struct SamplingParams {
  double temperature = 0.0;
  int max_tokens = 1024;
};

struct TokenUsage {
  int prompt_tokens = -1;      // -1 = not reported by the service
  int completion_tokens = -1;
};

struct ChatResult {
  std::string text;
  TokenUsage tokens;
  std::string model_tag;
};

class ChatProvider {
 public:
  virtual ~ChatProvider() = default;

  virtual std::string model_tag() const = 0;

  // One request, messages = [system, user]. Throws net::ProviderError once
  // retries are exhausted.
  virtual ChatResult complete(const std::string& system_text,
                              const std::string& user_text,
                              const SamplingParams& sampling) = 0;

  // Endpoint description for config snapshots. Never includes credentials.
  virtual nlohmann::json describe() const = 0;
};

struct HttpChatConfig {
  std::string base_url;  // scheme://host[:port]
  std::string path = "/v1/chat/completions";
  std::string model = "gpt-4";
  std::string api_key_env = "OPENAI_API_KEY";
  int timeout_s = 120;
  net::RetryPolicy retry;
};

// Client for chat services that accept {"model", "messages", ...} and answer
// {"choices": [{"message": {"content"}}], "usage": {...}}.
class HttpChatProvider : public ChatProvider {
 public:
  explicit HttpChatProvider(HttpChatConfig config);

  std::string model_tag() const override { return config_.model; }
  ChatResult complete(const std::string& system_text, const std::string& user_text,
                      const SamplingParams& sampling) override;
  nlohmann::json describe() const override;

 private:
  HttpChatConfig config_;
  net::JsonHttpClient client_;
};

// One attack attempt, persisted exactly as sent so campaigns replay.
struct AttemptRecord {
  std::string attempt_id;  // "<campaign>:<prompt>:<mode>"
  std::string prompt_id;
  codec::TransformMode mode = codec::TransformMode::IDENTITY;
  std::string variant;
  std::string payload;
  std::string system_text;
  std::string user_text;
  std::string response_text;
  std::string model_tag;
  std::string request_time;  // ISO 8601 UTC
  long latency_ms = 0;
  TokenUsage tokens;
  double temperature = 0.0;
  int max_tokens = 0;
  std::string status;  // "ok" | "transport_error"
  std::string error;   // set when status == transport_error
};

void to_json(nlohmann::json& j, const AttemptRecord& r);
void from_json(const nlohmann::json& j, AttemptRecord& r);

struct CampaignConfig {
  std::string campaign_id;
  std::filesystem::path dir;
  std::vector<codec::TransformMode> modes;
  guidance::GuidanceVariant variant = guidance::GuidanceVariant::VANILLA;
  guidance::GuidanceTemplate tpl = guidance::GuidanceTemplate::vanilla_default();
  SamplingParams sampling;
  codec::AimPolicy policy = codec::AimPolicy::kStrict;
  int concurrency = 2;
};

struct CampaignResult {
  std::string campaign_id;
  size_t requested = 0;  // |dataset| x |modes|
  size_t sent = 0;
  size_t skipped = 0;    // already persisted before this run
  size_t transport_errors = 0;
  std::filesystem::path records_path;
};

// Encodes every (prompt, mode), builds guidance, sends one chat request per
// pair with at most `concurrency` in flight, and appends a record per
// attempt. Pairs already present in the campaign's records file are skipped,
// which makes an interrupted campaign resumable and a finished one a no-op.
CampaignResult run_campaign(const Dataset& dataset, const CampaignConfig& config,
                            ChatProvider& target,
                            const std::function<void(const std::string&)>& log = {});

std::filesystem::path records_path(const std::filesystem::path& campaign_dir);
std::vector<AttemptRecord> load_attempts(const std::filesystem::path& campaign_dir);

}  // namespace flipmap::harness
