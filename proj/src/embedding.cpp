#include "flipmap/embedding.hpp"

#include <atomic>
#include <cstdint>
#include <fstream>
#include <thread>
#include <unordered_map>

#include "flipmap/hash.hpp"

namespace flipmap::semantics {

namespace {

// Filesystem-safe form of a model tag ("text-embedding-ada-002" stays as-is,
// anything exotic gets its slashes and such replaced).
std::string sanitize_tag(const std::string& tag) {
  std::string out = tag;
  for (char& c : out) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.';
    if (!ok) c = '_';
  }
  return out.empty() ? "untagged" : out;
}

uint64_t seed_from_hex(const std::string& hex) {
  uint64_t seed = 0;
  for (size_t i = 0; i < 16 && i < hex.size(); ++i) {
    char c = hex[i];
    uint64_t nibble = (c >= 'a') ? (c - 'a' + 10) : (c - '0');
    seed = (seed << 4) | nibble;
  }
  return seed;
}

// xorshift64*: small, fully specified, identical everywhere. The standard
// distributions are implementation-defined, which would break bit-identical
// mock vectors across toolchains.
double next_unit(uint64_t& state) {
  state ^= state >> 12;
  state ^= state << 25;
  state ^= state >> 27;
  uint64_t x = state * 0x2545F4914F6CDD1DULL;
  return static_cast<double>(x >> 11) * 0x1.0p-53;  // [0, 1)
}

}  // namespace

MockEmbeddingProvider::MockEmbeddingProvider(size_t dim, std::string tag)
    : dim_(dim), tag_(std::move(tag)) {
  if (dim_ == 0) {
    throw ConfigError("mock embedding dimension must be positive");
  }
}

std::vector<std::vector<double>> MockEmbeddingProvider::embed(
    const std::vector<std::string>& texts) {
  std::vector<std::vector<double>> out;
  out.reserve(texts.size());
  for (const auto& text : texts) {
    uint64_t state = seed_from_hex(hash::sha256_hex(tag_ + '\0' + text));
    if (state == 0) state = 0x9E3779B97F4A7C15ULL;
    std::vector<double> v(dim_);
    for (double& x : v) x = next_unit(state) * 2.0 - 1.0;
    v[0] += (v[0] >= 0 ? 1.0 : -1.0);  // keep the norm clearly nonzero
    out.push_back(std::move(v));
  }
  return out;
}

nlohmann::json MockEmbeddingProvider::describe() const {
  return {{"type", "mock"}, {"model", tag_}, {"dimension", dim_}};
}

HttpEmbeddingProvider::HttpEmbeddingProvider(HttpEmbeddingConfig config)
    : config_(std::move(config)),
      client_(config_.base_url, net::resolve_credential(config_.api_key_env),
              config_.timeout_s, config_.retry) {}

std::vector<std::vector<double>> HttpEmbeddingProvider::embed(
    const std::vector<std::string>& texts) {
  nlohmann::json body = {{"model", config_.model}, {"input", texts}};
  nlohmann::json res = client_.post_json(config_.path, body);

  if (!res.contains("data") || !res["data"].is_array() ||
      res["data"].size() != texts.size()) {
    throw net::ProviderError(
        "embedding response shape mismatch: expected " +
            std::to_string(texts.size()) + " vectors",
        1, 200);
  }
  std::vector<std::vector<double>> out(texts.size());
  for (const auto& item : res["data"]) {
    size_t index = item.at("index").get<size_t>();
    if (index >= out.size()) {
      throw net::ProviderError("embedding response index out of range", 1, 200);
    }
    out[index] = item.at("embedding").get<std::vector<double>>();
  }
  return out;
}

nlohmann::json HttpEmbeddingProvider::describe() const {
  return {{"type", "http"},
          {"base_url", config_.base_url},
          {"path", config_.path},
          {"model", config_.model},
          {"api_key_env", config_.api_key_env}};
}

EmbeddingCache::EmbeddingCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::filesystem::path EmbeddingCache::entry_path(const std::string& model_tag,
                                                 const std::string& text) const {
  return dir_ / sanitize_tag(model_tag) / (hash::sha256_hex(text) + ".json");
}

std::optional<std::vector<double>> EmbeddingCache::get(const std::string& model_tag,
                                                       const std::string& text) const {
  const auto path = entry_path(model_tag, text);
  std::ifstream in(path);
  if (!in) return std::nullopt;
  try {
    nlohmann::json record = nlohmann::json::parse(in);
    return record.at("vector").get<std::vector<double>>();
  } catch (const std::exception&) {
    return std::nullopt;  // unreadable entry: treat as a miss, refetch
  }
}

void EmbeddingCache::put(const std::string& model_tag, const std::string& text,
                         const std::vector<double>& vector) {
  const auto path = entry_path(model_tag, text);
  nlohmann::json record = {{"model_tag", model_tag},
                           {"sha256", hash::sha256_hex(text)},
                           {"dim", vector.size()},
                           {"vector", vector}};
  std::lock_guard<std::mutex> lock(write_mutex_);
  std::filesystem::create_directories(path.parent_path());
  // Write-then-rename so readers never see a torn entry.
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << record.dump();
  }
  std::filesystem::rename(tmp, path);
}

EmbeddingClient::EmbeddingClient(std::shared_ptr<EmbeddingProvider> provider,
                                 std::shared_ptr<EmbeddingCache> cache)
    : EmbeddingClient(std::move(provider), std::move(cache), Options()) {}

EmbeddingClient::EmbeddingClient(std::shared_ptr<EmbeddingProvider> provider,
                                 std::shared_ptr<EmbeddingCache> cache, Options options)
    : provider_(std::move(provider)), cache_(std::move(cache)), options_(options) {
  if (options_.concurrency < 1) options_.concurrency = 1;
  if (options_.batch_size < 1) options_.batch_size = 1;
}

std::vector<std::vector<double>> EmbeddingClient::embed_batch(
    const std::vector<std::string>& texts) {
  if (texts.empty()) {
    throw net::EmptyInput("embed_batch called with no texts");
  }
  for (size_t i = 0; i < texts.size(); ++i) {
    if (texts[i].empty()) {
      throw net::EmptyInput("embed_batch input " + std::to_string(i) + " is empty");
    }
  }

  const std::string tag = provider_->model_tag();

  // Deduplicate so each distinct text costs one fetch and one cache entry.
  std::vector<std::string> unique;
  std::unordered_map<std::string, size_t> index_of;
  for (const auto& text : texts) {
    if (index_of.emplace(text, unique.size()).second) {
      unique.push_back(text);
    }
  }

  std::vector<std::vector<double>> resolved(unique.size());
  std::vector<size_t> missing;
  for (size_t i = 0; i < unique.size(); ++i) {
    if (cache_) {
      if (auto hit = cache_->get(tag, unique[i])) {
        resolved[i] = std::move(*hit);
        continue;
      }
    }
    missing.push_back(i);
  }

  if (!missing.empty()) {
    // Chunk the misses, then let a bounded pool of workers fetch chunks.
    std::vector<std::pair<size_t, size_t>> chunks;  // [begin, end) into missing
    for (size_t begin = 0; begin < missing.size(); begin += options_.batch_size) {
      chunks.emplace_back(begin, std::min(begin + options_.batch_size, missing.size()));
    }

    std::atomic<size_t> next_chunk{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;

    auto worker = [&] {
      while (true) {
        size_t c = next_chunk.fetch_add(1);
        if (c >= chunks.size()) return;
        {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (first_error) return;
        }
        auto [begin, end] = chunks[c];
        std::vector<std::string> request(end - begin);
        for (size_t i = begin; i < end; ++i) request[i - begin] = unique[missing[i]];
        try {
          auto vectors = provider_->embed(request);
          if (vectors.size() != request.size()) {
            throw net::ProviderError("provider returned wrong vector count", 1, 0);
          }
          for (size_t i = begin; i < end; ++i) {
            if (cache_) cache_->put(tag, unique[missing[i]], vectors[i - begin]);
            resolved[missing[i]] = std::move(vectors[i - begin]);
          }
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    };

    const size_t pool = std::min<size_t>(options_.concurrency, chunks.size());
    std::vector<std::thread> threads;
    threads.reserve(pool);
    for (size_t i = 0; i < pool; ++i) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  std::vector<std::vector<double>> out;
  out.reserve(texts.size());
  for (const auto& text : texts) {
    out.push_back(resolved[index_of.at(text)]);
  }
  return out;
}

}  // namespace flipmap::semantics
