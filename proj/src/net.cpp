#include "flipmap/net.hpp"

#include <httplib.h>

#include <chrono>
#include <cstdlib>
#include <thread>

namespace flipmap::net {

namespace {

bool retryable_status(int status) {
  return status == 429 || (status >= 500 && status < 600);
}

std::optional<double> parse_retry_after(const httplib::Response& res) {
  if (!res.has_header("Retry-After")) return std::nullopt;
  try {
    return std::stod(res.get_header_value("Retry-After"));
  } catch (const std::exception&) {
    return std::nullopt;  // HTTP-date form; fall back to backoff schedule
  }
}

}  // namespace

ProviderError::ProviderError(const std::string& what, int attempts, int last_status,
                             std::optional<double> retry_after_s)
    : Error(what + " (after " + std::to_string(attempts) + " attempt" +
            (attempts == 1 ? "" : "s") + ")"),
      attempts_(attempts),
      last_status_(last_status),
      retry_after_s_(retry_after_s) {}

JsonHttpClient::JsonHttpClient(std::string base_url, std::string bearer_token,
                               int timeout_s, RetryPolicy retry)
    : base_url_(std::move(base_url)),
      bearer_token_(std::move(bearer_token)),
      timeout_s_(timeout_s),
      retry_(retry) {
  if (base_url_.empty()) {
    throw ConfigError("endpoint base URL is not configured");
  }
}

nlohmann::json JsonHttpClient::post_json(const std::string& path,
                                         const nlohmann::json& body) const {
  const std::string payload = body.dump();
  std::string last_error;
  int last_status = 0;
  std::optional<double> retry_after;

  int delay_ms = retry_.base_delay_ms;
  int attempt = 0;
  while (attempt < retry_.max_attempts) {
    ++attempt;

    httplib::Client client(base_url_);
    client.set_connection_timeout(timeout_s_, 0);
    client.set_read_timeout(timeout_s_, 0);
    client.set_write_timeout(timeout_s_, 0);
    httplib::Headers headers;
    if (!bearer_token_.empty()) {
      headers.emplace("Authorization", "Bearer " + bearer_token_);
    }

    auto res = client.Post(path, headers, payload, "application/json");
    if (res) {
      last_status = res->status;
      retry_after = parse_retry_after(*res);
      if (res->status >= 200 && res->status < 300) {
        try {
          return nlohmann::json::parse(res->body);
        } catch (const nlohmann::json::parse_error& e) {
          throw ProviderError(
              std::string("unparseable response body from ") + base_url_ + path +
                  ": " + e.what(),
              attempt, res->status);
        }
      }
      last_error = "HTTP " + std::to_string(res->status) + " from " + base_url_ + path;
      if (!retryable_status(res->status)) {
        throw ProviderError(last_error, attempt, res->status, retry_after);
      }
    } else {
      last_error = "transport failure contacting " + base_url_ + path + ": " +
                   httplib::to_string(res.error());
    }

    if (attempt >= retry_.max_attempts) break;

    int sleep_ms = delay_ms;
    if (retry_after) {
      sleep_ms = static_cast<int>(*retry_after * 1000.0);
    }
    sleep_ms = std::min(sleep_ms, retry_.max_delay_ms);
    if (sleep_ms > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(sleep_ms));
    }
    delay_ms = std::min(static_cast<int>(delay_ms * retry_.multiplier),
                        retry_.max_delay_ms);
  }

  throw ProviderError(last_error, attempt, last_status, retry_after);
}

std::string resolve_credential(const std::string& env_name) {
  if (env_name.empty()) return "";
  const char* value = std::getenv(env_name.c_str());
  if (value == nullptr || *value == '\0') {
    throw ConfigError("credential environment variable " + env_name + " is not set");
  }
  return value;
}

}  // namespace flipmap::net
