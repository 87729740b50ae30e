#include "flipmap/campaign.hpp"

#include <atomic>
#include <chrono>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include "flipmap/jsonl.hpp"
#include "flipmap/util.hpp"

namespace flipmap::harness {

namespace {

constexpr std::string_view kRecordsFile = "attempts.jsonl";
constexpr std::string_view kConfigFile = "config.json";
constexpr std::string_view kLogFile = "campaign.log";

}  // namespace

HttpChatProvider::HttpChatProvider(HttpChatConfig config)
    : config_(std::move(config)),
      client_(config_.base_url, net::resolve_credential(config_.api_key_env),
              config_.timeout_s, config_.retry) {}

ChatResult HttpChatProvider::complete(const std::string& system_text,
                                      const std::string& user_text,
                                      const SamplingParams& sampling) {
  nlohmann::json body = {
      {"model", config_.model},
      {"messages",
       {{{"role", "system"}, {"content", system_text}},
        {{"role", "user"}, {"content", user_text}}}},
      {"temperature", sampling.temperature},
      {"max_tokens", sampling.max_tokens},
  };
  nlohmann::json res = client_.post_json(config_.path, body);

  ChatResult result;
  try {
    result.text = res.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw net::ProviderError(std::string("chat response missing choices[0].message.content: ") +
                                 e.what(),
                             1, 200);
  }
  result.model_tag = res.value("model", config_.model);
  if (res.contains("usage")) {
    result.tokens.prompt_tokens = res["usage"].value("prompt_tokens", -1);
    result.tokens.completion_tokens = res["usage"].value("completion_tokens", -1);
  }
  return result;
}

nlohmann::json HttpChatProvider::describe() const {
  return {{"type", "http"},
          {"base_url", config_.base_url},
          {"path", config_.path},
          {"model", config_.model},
          {"api_key_env", config_.api_key_env},
          {"retry_max_attempts", config_.retry.max_attempts}};
}

void to_json(nlohmann::json& j, const AttemptRecord& r) {
  j = nlohmann::json{
      {"attempt_id", r.attempt_id},
      {"prompt_id", r.prompt_id},
      {"mode", codec::mode_name(r.mode)},
      {"variant", r.variant},
      {"payload", r.payload},
      {"system_text", r.system_text},
      {"user_text", r.user_text},
      {"response_text", r.response_text},
      {"model_tag", r.model_tag},
      {"request_time", r.request_time},
      {"latency_ms", r.latency_ms},
      {"prompt_tokens", r.tokens.prompt_tokens},
      {"completion_tokens", r.tokens.completion_tokens},
      {"temperature", r.temperature},
      {"max_tokens", r.max_tokens},
      {"status", r.status},
      {"error", r.error},
  };
}

void from_json(const nlohmann::json& j, AttemptRecord& r) {
  r.attempt_id = j.at("attempt_id").get<std::string>();
  r.prompt_id = j.at("prompt_id").get<std::string>();
  auto mode = codec::mode_from_name(j.at("mode").get<std::string>());
  if (!mode) {
    throw Error("attempt " + r.attempt_id + ": unknown mode in record");
  }
  r.mode = *mode;
  r.variant = j.value("variant", "vanilla");
  r.payload = j.value("payload", "");
  r.system_text = j.at("system_text").get<std::string>();
  r.user_text = j.at("user_text").get<std::string>();
  r.response_text = j.value("response_text", "");
  r.model_tag = j.value("model_tag", "");
  r.request_time = j.value("request_time", "");
  r.latency_ms = j.value("latency_ms", 0L);
  r.tokens.prompt_tokens = j.value("prompt_tokens", -1);
  r.tokens.completion_tokens = j.value("completion_tokens", -1);
  r.temperature = j.value("temperature", 0.0);
  r.max_tokens = j.value("max_tokens", 0);
  r.status = j.value("status", "ok");
  r.error = j.value("error", "");
}

std::filesystem::path records_path(const std::filesystem::path& campaign_dir) {
  return campaign_dir / kRecordsFile;
}

std::vector<AttemptRecord> load_attempts(const std::filesystem::path& campaign_dir) {
  const auto path = records_path(campaign_dir);
  std::vector<AttemptRecord> attempts;
  if (!std::filesystem::exists(path)) return attempts;
  for (const auto& record : jsonl::read_file(path)) {
    attempts.push_back(record.get<AttemptRecord>());
  }
  return attempts;
}

CampaignResult run_campaign(const Dataset& dataset, const CampaignConfig& config,
                            ChatProvider& target,
                            const std::function<void(const std::string&)>& log) {
  if (config.modes.empty()) {
    throw ConfigError("campaign has no transform modes");
  }
  if (dataset.entries.empty()) {
    throw EmptyDataset("campaign dataset has no prompts");
  }

  std::filesystem::create_directories(config.dir);

  std::ofstream log_file(config.dir / kLogFile, std::ios::app);
  std::mutex log_mutex;
  auto emit_log = [&](const std::string& line) {
    std::lock_guard<std::mutex> lock(log_mutex);
    log_file << util::iso8601_utc_now() << " " << line << '\n';
    log_file.flush();
    if (log) log(line);
  };

  // Pre-encode and render everything before the first request: a codec
  // failure aborts the campaign while it is still free to rerun.
  struct WorkItem {
    const codec::Prompt* prompt;
    codec::TransformMode mode;
    std::string payload;
    guidance::GuidanceBundle bundle;
  };
  std::set<std::pair<std::string, std::string>> done;
  for (const auto& attempt : load_attempts(config.dir)) {
    done.emplace(attempt.prompt_id, std::string(codec::mode_name(attempt.mode)));
  }

  std::vector<WorkItem> work;
  size_t skipped = 0;
  for (const auto& prompt : dataset.entries) {
    for (const auto mode : config.modes) {
      if (done.count({prompt.id, std::string(codec::mode_name(mode))})) {
        ++skipped;
        continue;
      }
      try {
        std::string payload = codec::encode(mode, prompt.text, config.policy);
        auto bundle = guidance::build_guidance(mode, config.variant, payload, config.tpl);
        work.push_back({&prompt, mode, std::move(payload), std::move(bundle)});
      } catch (const Error& e) {
        throw Error("prompt " + prompt.id + " cannot be prepared for mode " +
                    std::string(codec::mode_name(mode)) + ": " + e.what());
      }
    }
  }

  // Config snapshot from the first run is kept as-is on resume.
  const auto config_path = config.dir / kConfigFile;
  if (!std::filesystem::exists(config_path)) {
    nlohmann::json modes = nlohmann::json::array();
    for (const auto mode : config.modes) modes.push_back(codec::mode_name(mode));
    nlohmann::json snapshot = {
        {"campaign_id", config.campaign_id},
        {"dataset", {{"name", dataset.name}, {"path", dataset.source_path},
                     {"prompts", dataset.entries.size()}}},
        {"modes", modes},
        {"variant", guidance::variant_name(config.variant)},
        {"template_version", config.tpl.version},
        {"sampling", {{"temperature", config.sampling.temperature},
                      {"max_tokens", config.sampling.max_tokens}}},
        {"concurrency", config.concurrency},
        {"target", target.describe()},
        {"created", util::iso8601_utc_now()},
    };
    std::ofstream out(config_path);
    out << snapshot.dump(2) << '\n';
  }

  jsonl::Writer writer(records_path(config.dir));
  std::mutex writer_mutex;

  std::atomic<size_t> next{0};
  std::atomic<size_t> transport_errors{0};
  std::mutex failure_mutex;
  std::exception_ptr fatal;

  auto runner = [&] {
    while (true) {
      size_t i = next.fetch_add(1);
      if (i >= work.size()) return;
      {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (fatal) return;
      }
      const auto& item = work[i];

      AttemptRecord record;
      record.attempt_id = config.campaign_id + ":" + item.prompt->id + ":" +
                          std::string(codec::mode_name(item.mode));
      record.prompt_id = item.prompt->id;
      record.mode = item.mode;
      record.variant = std::string(guidance::variant_name(config.variant));
      record.payload = item.payload;
      record.system_text = item.bundle.system.full_text;
      record.user_text = item.bundle.user_message;
      record.model_tag = target.model_tag();
      record.request_time = util::iso8601_utc_now();
      record.temperature = config.sampling.temperature;
      record.max_tokens = config.sampling.max_tokens;

      const auto start = std::chrono::steady_clock::now();
      try {
        ChatResult result = target.complete(record.system_text, record.user_text,
                                            config.sampling);
        record.response_text = result.text;
        record.tokens = result.tokens;
        if (!result.model_tag.empty()) record.model_tag = result.model_tag;
        record.status = "ok";
      } catch (const net::ProviderError& e) {
        record.status = "transport_error";
        record.error = e.what();
        transport_errors.fetch_add(1);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!fatal) fatal = std::current_exception();
        return;
      }
      record.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                              std::chrono::steady_clock::now() - start)
                              .count();

      try {
        std::lock_guard<std::mutex> lock(writer_mutex);
        writer.append(record);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!fatal) fatal = std::current_exception();
        return;
      }
      emit_log(record.attempt_id + " " + record.status +
               (record.error.empty() ? "" : ": " + record.error));
    }
  };

  emit_log("campaign " + config.campaign_id + ": " + std::to_string(work.size()) +
           " attempts to send, " + std::to_string(skipped) + " already recorded");

  const size_t pool = std::min<size_t>(std::max(config.concurrency, 1),
                                       std::max<size_t>(work.size(), 1));
  std::vector<std::thread> threads;
  threads.reserve(pool);
  for (size_t i = 0; i < pool; ++i) threads.emplace_back(runner);
  for (auto& t : threads) t.join();
  if (fatal) std::rethrow_exception(fatal);

  CampaignResult result;
  result.campaign_id = config.campaign_id;
  result.requested = dataset.entries.size() * config.modes.size();
  result.sent = work.size();
  result.skipped = skipped;
  result.transport_errors = transport_errors.load();
  result.records_path = records_path(config.dir);
  emit_log("campaign " + config.campaign_id + " finished: " +
           std::to_string(result.sent) + " sent, " +
           std::to_string(result.transport_errors) + " transport errors");
  return result;
}

}  // namespace flipmap::harness
