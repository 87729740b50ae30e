// In-process HTTP services that stand in for embedding and chat endpoints.
// They speak the same request/response shapes as the real providers and
// instrument concurrency so rate-discipline claims are observable.
#pragma once

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <atomic>
#include <chrono>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>

namespace testutil {

class ScopedServer {
 public:
  ScopedServer() = default;

  ~ScopedServer() { stop(); }

  void start() {
    port_ = server.bind_to_any_port("127.0.0.1");
    if (port_ <= 0) throw std::runtime_error("cannot bind mock server");
    thread_ = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }

  void stop() {
    if (thread_.joinable()) {
      server.stop();
      thread_.join();
    }
  }

  int port() const { return port_; }
  std::string base_url() const { return "http://127.0.0.1:" + std::to_string(port_); }

  httplib::Server server;

 private:
  int port_ = 0;
  std::thread thread_;
};

// Tracks how many handlers run at once and the high-water mark.
class InflightGauge {
 public:
  void enter() {
    int now = ++current_;
    int seen = max_.load();
    while (now > seen && !max_.compare_exchange_weak(seen, now)) {
    }
  }
  void leave() { --current_; }

  int max_seen() const { return max_.load(); }

 private:
  std::atomic<int> current_{0};
  std::atomic<int> max_{0};
};

// Embedding endpoint: a tiny deterministic 4-dim embedding derived from the
// text bytes, enough for shape and pipeline tests.
inline void serve_embeddings(ScopedServer& server, std::atomic<int>* request_count = nullptr,
                             InflightGauge* gauge = nullptr, int delay_ms = 0) {
  server.server.Post("/v1/embeddings", [=](const httplib::Request& req,
                                           httplib::Response& res) {
    if (gauge) gauge->enter();
    if (delay_ms > 0) std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms));
    if (request_count) request_count->fetch_add(1);
    auto body = nlohmann::json::parse(req.body);
    nlohmann::json data = nlohmann::json::array();
    size_t index = 0;
    for (const auto& text : body.at("input")) {
      const std::string s = text.get<std::string>();
      double a = 1.0, b = 0.0, c = 0.0, d = 0.0;
      for (size_t i = 0; i < s.size(); ++i) {
        a += static_cast<double>(static_cast<unsigned char>(s[i])) / 255.0;
        b += (i % 2 == 0) ? 0.5 : -0.25;
        c += static_cast<double>(s[i] % 7);
        d += 0.125;
      }
      data.push_back({{"index", index++}, {"embedding", {a, b, c, d}}});
    }
    nlohmann::json out = {{"data", data}, {"model", body.value("model", "mock-remote")}};
    res.set_content(out.dump(), "application/json");
    if (gauge) gauge->leave();
  });
}

// Chat endpoint with a scriptable reply.
inline void serve_chat(
    ScopedServer& server,
    std::function<std::string(const nlohmann::json& request)> reply,
    std::atomic<int>* request_count = nullptr, InflightGauge* gauge = nullptr,
    int delay_ms = 0) {
  server.server.Post("/v1/chat/completions", [=, reply = std::move(reply)](
                                                 const httplib::Request& req,
                                                 httplib::Response& res) {
    if (gauge) gauge->enter();
    if (delay_ms > 0) std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms));
    if (request_count) request_count->fetch_add(1);
    auto body = nlohmann::json::parse(req.body);
    nlohmann::json out = {
        {"model", body.value("model", "mock-chat")},
        {"choices",
         {{{"index", 0},
           {"message", {{"role", "assistant"}, {"content", reply(body)}}}}}},
        {"usage", {{"prompt_tokens", 42}, {"completion_tokens", 17}}},
    };
    res.set_content(out.dump(), "application/json");
    if (gauge) gauge->leave();
  });
}

}  // namespace testutil
