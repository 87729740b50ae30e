#pragma once

#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "flipmap/net.hpp"

namespace flipmap::semantics {

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  virtual std::string model_tag() const = 0;

  // One embedding per input text, order-preserving. A single call maps to a
  // single upstream request; batching across calls is the client's job.
  virtual std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) = 0;

  // Endpoint description for config snapshots. Never includes credentials.
  virtual nlohmann::json describe() const = 0;
};

// Deterministic offline provider: each vector is derived from a hash of
// (model_tag, text), so identical inputs give bit-identical vectors on every
// platform and run. Used for network-free tests and pipeline shakedowns.
class MockEmbeddingProvider : public EmbeddingProvider {
 public:
  explicit MockEmbeddingProvider(size_t dim = 64, std::string tag = "mock-embed");

  std::string model_tag() const override { return tag_; }
  std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) override;
  nlohmann::json describe() const override;

 private:
  size_t dim_;
  std::string tag_;
};

struct HttpEmbeddingConfig {
  std::string base_url;  // scheme://host[:port]
  std::string path = "/v1/embeddings";
  std::string model = "text-embedding-ada-002";
  std::string api_key_env = "OPENAI_API_KEY";
  int timeout_s = 60;
  net::RetryPolicy retry;
};

// Client for embedding services that accept {"model", "input": [...]} and
// answer {"data": [{"index", "embedding"}, ...]}.
class HttpEmbeddingProvider : public EmbeddingProvider {
 public:
  explicit HttpEmbeddingProvider(HttpEmbeddingConfig config);

  std::string model_tag() const override { return config_.model; }
  std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) override;
  nlohmann::json describe() const override;

 private:
  HttpEmbeddingConfig config_;
  net::JsonHttpClient client_;
};

// On-disk vector store keyed by (model_tag, sha256(text)): one JSON file per
// entry, so re-analyses are free and survive interrupted runs. Writes are
// serialized through one mutex.
class EmbeddingCache {
 public:
  explicit EmbeddingCache(std::filesystem::path dir);

  std::optional<std::vector<double>> get(const std::string& model_tag,
                                         const std::string& text) const;
  void put(const std::string& model_tag, const std::string& text,
           const std::vector<double>& vector);

  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path entry_path(const std::string& model_tag,
                                   const std::string& text) const;

  std::filesystem::path dir_;
  mutable std::mutex write_mutex_;
};

// Provider plus cache plus bounded fan-out. Deduplicates identical texts
// within a call, so one string is fetched (and cached) once.
class EmbeddingClient {
 public:
  struct Options {
    int concurrency = 4;     // concurrent in-flight requests
    size_t batch_size = 64;  // texts per request
  };

  explicit EmbeddingClient(std::shared_ptr<EmbeddingProvider> provider,
                           std::shared_ptr<EmbeddingCache> cache = nullptr);
  EmbeddingClient(std::shared_ptr<EmbeddingProvider> provider,
                  std::shared_ptr<EmbeddingCache> cache, Options options);

  // Throws net::EmptyInput when `texts` is empty or contains an empty
  // string; propagates net::ProviderError from the provider.
  std::vector<std::vector<double>> embed_batch(const std::vector<std::string>& texts);

  std::string model_tag() const { return provider_->model_tag(); }
  const EmbeddingProvider& provider() const { return *provider_; }

 private:
  std::shared_ptr<EmbeddingProvider> provider_;
  std::shared_ptr<EmbeddingCache> cache_;
  Options options_;
};

}  // namespace flipmap::semantics
