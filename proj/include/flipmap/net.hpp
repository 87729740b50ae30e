#pragma once

#include <nlohmann/json.hpp>

#include <optional>
#include <string>

#include "flipmap/error.hpp"

namespace flipmap::net {

// Bounded exponential backoff for transport and quota errors.
struct RetryPolicy {
  int max_attempts = 3;
  int base_delay_ms = 250;
  double multiplier = 2.0;
  int max_delay_ms = 4000;
};

// Raised when a request still fails after every retry. Carries enough for
// callers to report the attempt count and any server-provided retry hint.
class ProviderError : public Error {
 public:
  ProviderError(const std::string& what, int attempts, int last_status,
                std::optional<double> retry_after_s = std::nullopt);

  int attempts() const { return attempts_; }
  int last_status() const { return last_status_; }  // 0 = no HTTP response
  std::optional<double> retry_after_seconds() const { return retry_after_s_; }

 private:
  int attempts_;
  int last_status_;
  std::optional<double> retry_after_s_;
};

class EmptyInput : public Error {
 public:
  using Error::Error;
};

// Minimal JSON-over-HTTP POST client. `base_url` is scheme://host[:port];
// request paths are given per call. A bearer token is attached when
// non-empty. Each call opens its own connection, so one instance may be
// shared across worker threads.
class JsonHttpClient {
 public:
  JsonHttpClient(std::string base_url, std::string bearer_token, int timeout_s,
                 RetryPolicy retry);

  // POSTs `body` as application/json and returns the parsed response body.
  // Retries on connection failures, HTTP 429 and 5xx; honors Retry-After
  // when present. Throws ProviderError once attempts are exhausted and on
  // non-retryable statuses.
  nlohmann::json post_json(const std::string& path, const nlohmann::json& body) const;

  const std::string& base_url() const { return base_url_; }

 private:
  std::string base_url_;
  std::string bearer_token_;
  int timeout_s_;
  RetryPolicy retry_;
};

// Resolves a credential environment variable. Empty `env_name` means the
// endpoint needs no credential. A named but unset variable is a ConfigError.
std::string resolve_credential(const std::string& env_name);

}  // namespace flipmap::net
